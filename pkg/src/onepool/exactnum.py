"""Exact rational numbers and the two numeric modes used across the package.

``Rational`` is :class:`fractions.Fraction`: arbitrary precision, immutable,
and reduced to lowest terms after every operation.
"""
from __future__ import annotations

import enum
import re
from fractions import Fraction

Rational = Fraction

#: Tolerance used for every comparison in FLOAT mode.
TAU = 1e-9

_DECIMAL_RE = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)")
_FRACTION_RE = re.compile(r"[+-]?\d+/\d+")


class Mode(enum.Enum):
    EXACT = "exact"
    FLOAT = "float"


class RationalParseError(ValueError):
    pass


def rat_from_decimal(text: str) -> Fraction:
    """Parse ``"-3"``, ``"0.1"`` or ``"7/21"`` into an exact rational.

    Decimal literals are read digit by digit, so ``"0.1"`` is exactly 1/10.
    Exponents, whitespace inside the literal and ``inf``/``nan`` are rejected.
    """
    if not isinstance(text, str):
        raise RationalParseError(f"expected a string, got {type(text).__name__}")
    s = text.strip()
    if _FRACTION_RE.fullmatch(s):
        num, den = s.split("/")
        if int(den) == 0:
            raise RationalParseError(f"zero denominator in {text!r}")
        return Fraction(int(num), int(den))
    if _DECIMAL_RE.fullmatch(s):
        return Fraction(s)
    raise RationalParseError(f"not a decimal or fraction literal: {text!r}")


def rat_to_str(value) -> str:
    """Render a number so that :func:`rat_from_decimal` reads it back exactly.

    Rationals become ``"p/q"`` (or ``"p"`` when integral); floats keep their
    shortest round-trip decimal form.
    """
    if isinstance(value, float):
        r = repr(value)
        if "e" in r or "E" in r:
            return str(Fraction(value))
        return r
    return str(Fraction(value))


def rat_cmp(a, b) -> int:
    """Return -1, 0 or 1 as ``a`` is less than, equal to, or greater than ``b``."""
    a, b = Fraction(a), Fraction(b)
    # cross-multiplication; denominators are positive
    lhs = a.numerator * b.denominator
    rhs = b.numerator * a.denominator
    return (lhs > rhs) - (lhs < rhs)


def to_mode(value, mode: Mode):
    if mode is Mode.FLOAT:
        return float(value)
    return Fraction(value)


def sign(value, mode: Mode = Mode.EXACT) -> int:
    if mode is Mode.FLOAT:
        if abs(value) <= TAU:
            return 0
        return 1 if value > 0 else -1
    return (value > 0) - (value < 0)
