"""Dense two-phase simplex with Bland's rule.

EXACT mode pivots on ``gmpy2.mpq`` entries and returns ``Fraction`` results;
FLOAT mode pivots on binary64 with tolerance :data:`~onepool.exactnum.TAU`.
Every variable has lower bound 0; finite upper bounds are turned into
explicit ``<=`` rows before pivoting.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import gmpy2

from .exactnum import TAU, Mode

LE, EQ, GE = "<=", "=", ">="

DEFAULT_PIVOT_CAP = 10**6


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class PivotCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Row:
    coeffs: tuple
    rel: str
    rhs: object


@dataclass
class LinearProgram:
    """``min objective . x`` subject to ``rows`` and ``0 <= x <= upper``.

    ``upper[i] is None`` means no upper bound.
    """
    num_vars: int
    objective: tuple
    rows: list = field(default_factory=list)
    upper: tuple = ()

    def __post_init__(self):
        if not self.upper:
            self.upper = (None,) * self.num_vars
        if len(self.objective) != self.num_vars or len(self.upper) != self.num_vars:
            raise ValueError("objective/upper length must equal num_vars")
        for r in self.rows:
            if len(r.coeffs) != self.num_vars:
                raise ValueError("row length must equal num_vars")
            if r.rel not in (LE, EQ, GE):
                raise ValueError(f"unknown relation {r.rel!r}")

    def add_row(self, coeffs, rel, rhs):
        self.rows.append(Row(tuple(coeffs), rel, rhs))

    @property
    def num_rows(self) -> int:
        return len(self.rows)


@dataclass
class LpResult:
    status: LpStatus
    value: object = None
    point: Optional[tuple] = None
    pivot_count: int = 0

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


class _Arith:
    """Sign tests and conversions for one numeric mode."""

    def __init__(self, mode: Mode):
        self.mode = mode
        if mode is Mode.EXACT:
            self.conv = gmpy2.mpq
            self.zero, self.one = gmpy2.mpq(0), gmpy2.mpq(1)
        else:
            self.conv = float
            self.zero, self.one = 0.0, 1.0

    def pos(self, v) -> bool:
        return v > TAU if self.mode is Mode.FLOAT else v > 0

    def neg(self, v) -> bool:
        return v < -TAU if self.mode is Mode.FLOAT else v < 0

    def nonzero(self, v) -> bool:
        return abs(v) > TAU if self.mode is Mode.FLOAT else v != 0

    def out(self, v):
        if self.mode is Mode.FLOAT:
            return float(v)
        return Fraction(int(v.numerator), int(v.denominator))


class _Tableau:
    def __init__(self, rows, basis, ar: _Arith, cap: int):
        self.T = rows  # each row: [coeffs..., rhs]
        self.basis = basis
        self.ar = ar
        self.pivots = 0
        self.cap = cap

    def pivot(self, z, r, c):
        self.pivots += 1
        if self.pivots > self.cap:
            raise PivotCapExceeded(f"more than {self.cap} pivots")
        T = self.T
        row = T[r]
        p = row[c]
        if p != 1:
            row = [v / p for v in row]
            T[r] = row
        nz = [j for j, v in enumerate(row) if v]
        floaty = self.ar.mode is Mode.FLOAT
        for Ti in T + [z]:
            if Ti is row:
                continue
            f = Ti[c]
            if not f:
                continue
            for j in nz:
                Ti[j] -= f * row[j]
            if floaty:
                for j in nz:
                    if abs(Ti[j]) < 1e-13:
                        Ti[j] = 0.0
            Ti[c] = self.ar.zero
        self.basis[r] = c

    def run(self, z, allowed: int) -> bool:
        """Minimize until optimal (True) or an unbounded ray is found (False).

        ``z`` holds reduced costs and ``-objective`` in its last slot; only
        columns ``< allowed`` may enter.
        """
        ar = self.ar
        while True:
            c = next((j for j in range(allowed) if ar.neg(z[j])), None)
            if c is None:
                return True
            best_r, best_ratio = None, None
            for i, Ti in enumerate(self.T):
                a = Ti[c]
                if not ar.pos(a):
                    continue
                ratio = Ti[-1] / a
                if best_r is None:
                    best_r, best_ratio = i, ratio
                    continue
                d = ratio - best_ratio
                if ar.neg(d) or (not ar.pos(d) and self.basis[i] < self.basis[best_r]):
                    best_r, best_ratio = i, ratio
            if best_r is None:
                return False
            self.pivot(z, best_r, c)


def _presolve(lp: LinearProgram, ar: _Arith):
    """Drop variables fixed at zero and fold singleton ``<=`` rows into bounds.

    Returns ``(keep, rows, upper)`` over the kept variables, or ``None`` when a
    row is already violated.
    """
    keep = [i for i in range(lp.num_vars)
            if lp.upper[i] is None or ar.pos(ar.conv(lp.upper[i]))]
    if any(lp.upper[i] is not None and ar.neg(ar.conv(lp.upper[i])) for i in range(lp.num_vars)):
        return None
    upper = [None if lp.upper[i] is None else ar.conv(lp.upper[i]) for i in keep]
    rows = []
    for r in lp.rows:
        coeffs = [ar.conv(r.coeffs[i]) for i in keep]
        rhs = ar.conv(r.rhs)
        support = [k for k, a in enumerate(coeffs) if ar.nonzero(a)]
        if not support:
            ok = {LE: not ar.neg(rhs), GE: not ar.pos(rhs), EQ: not ar.nonzero(rhs)}[r.rel]
            if not ok:
                return None
            continue
        if len(support) == 1:
            k = support[0]
            a = coeffs[k]
            if (r.rel == LE and ar.pos(a)) or (r.rel == GE and ar.neg(a)):
                bound = rhs / a
                if ar.neg(bound):
                    return None
                if upper[k] is None or bound < upper[k]:
                    upper[k] = bound
                continue
        rows.append((coeffs, r.rel, rhs))
    for k, ub in enumerate(upper):
        if ub is not None:
            coeffs = [ar.zero] * len(keep)
            coeffs[k] = ar.one
            rows.append((coeffs, LE, ub))
    return keep, rows


def solve_lp(lp: LinearProgram, mode: Mode = Mode.EXACT, pivot_cap: int = DEFAULT_PIVOT_CAP) -> LpResult:
    ar = _Arith(mode)
    pre = _presolve(lp, ar)
    if pre is None:
        return LpResult(LpStatus.INFEASIBLE)
    keep, rows = pre
    nv = len(keep)

    # rhs >= 0, then slack / surplus / artificial columns
    norm = []
    for coeffs, rel, rhs in rows:
        if ar.neg(rhs):
            coeffs = [-a for a in coeffs]
            rhs = -rhs
            rel = {LE: GE, GE: LE, EQ: EQ}[rel]
        norm.append((coeffs, rel, rhs))
    n_slack = sum(1 for _, rel, _ in norm if rel != EQ)
    n_art = sum(1 for _, rel, _ in norm if rel != LE)
    width = nv + n_slack + n_art
    T, basis = [], []
    s_col, a_col = nv, nv + n_slack
    art_rows = []
    for coeffs, rel, rhs in norm:
        row = list(coeffs) + [ar.zero] * (n_slack + n_art) + [rhs]
        if rel == LE:
            row[s_col] = ar.one
            basis.append(s_col)
            s_col += 1
        else:
            if rel == GE:
                row[s_col] = -ar.one
                s_col += 1
            row[a_col] = ar.one
            basis.append(a_col)
            art_rows.append(len(T))
            a_col += 1
        T.append(row)

    tab = _Tableau(T, basis, ar, pivot_cap)
    first_art = nv + n_slack

    if n_art:
        z = [ar.zero] * (width + 1)
        for i in art_rows:
            for j in range(first_art):
                z[j] -= T[i][j]
            z[-1] -= T[i][-1]
        tab.run(z, first_art)
        if ar.pos(-z[-1]):
            return LpResult(LpStatus.INFEASIBLE, pivot_count=tab.pivots)
        # drive leftover zero-level artificials out of the basis
        i = 0
        while i < len(tab.T):
            if tab.basis[i] >= first_art:
                c = next((j for j in range(first_art) if ar.nonzero(tab.T[i][j])), None)
                if c is None:
                    del tab.T[i]
                    del tab.basis[i]
                    continue
                tab.pivot(z, i, c)
            i += 1
        tab.T = [r[:first_art] + [r[-1]] for r in tab.T]

    cost = [ar.conv(lp.objective[i]) for i in keep] + [ar.zero] * n_slack
    z = cost + [ar.zero]
    for i, b in enumerate(tab.basis):
        cb = cost[b]
        if cb:
            Ti = tab.T[i]
            for j in range(len(z)):
                z[j] -= cb * Ti[j]
    if not tab.run(z, first_art):
        return LpResult(LpStatus.UNBOUNDED, pivot_count=tab.pivots)

    values = [ar.zero] * nv
    for i, b in enumerate(tab.basis):
        if b < nv:
            values[b] = tab.T[i][-1]
    zero_out = Fraction(0) if mode is Mode.EXACT else 0.0
    point = [zero_out] * lp.num_vars
    for k, i in enumerate(keep):
        point[i] = ar.out(values[k])
    if mode is Mode.EXACT:
        value = sum((Fraction(c) * x for c, x in zip(lp.objective, point)), Fraction(0))
    else:
        value = sum(float(c) * x for c, x in zip(lp.objective, point))
    return LpResult(LpStatus.OPTIMAL, value, tuple(point), tab.pivots)


# --- strict / weak systems ------------------------------------------------------

@dataclass(frozen=True)
class Constraint:
    """``coeffs . z  rel  rhs`` with ``rel`` one of ``<=``, ``<``, ``>=``, ``>``."""
    coeffs: tuple
    rel: str
    rhs: object

    @property
    def strict(self) -> bool:
        return self.rel in ("<", ">")


def solve_max_min_slack(constraints: Sequence[Constraint], dim: int, domain: str = "simplex"):
    """Find a point of a mixed strict/weak system by maximizing the smallest
    strict slack.

    ``domain`` is ``"simplex"`` (``z >= 0``, ``sum(z) <= 1``) or ``"free"``.
    Strict rows are scaled by their largest absolute coefficient and the
    slack is capped at 1, so the program is always bounded.

    Returns ``(t, z)``; ``t is None`` when even the closure of the system is
    empty. The strict system has a solution exactly when ``t > 0``, and then
    ``z`` satisfies every row.
    """
    if domain not in ("simplex", "free"):
        raise ValueError(f"unknown domain {domain!r}")
    free = domain == "free"
    nz = 2 * dim if free else dim
    nvars = nz + 1  # last variable is the slack t
    lp = LinearProgram(nvars, (0,) * nz + (-1,), [], (None,) * nz + (1,))

    def expand(a):
        a = [Fraction(v) for v in a]
        return a + [-v for v in a] if free else a

    for con in constraints:
        a = [Fraction(v) for v in con.coeffs]
        b = Fraction(con.rhs)
        if con.rel in (">=", ">"):
            a, b = [-v for v in a], -b
        if con.strict:
            scale = max((abs(v) for v in a), default=Fraction(0))
            if scale:
                a, b = [v / scale for v in a], b / scale
            lp.add_row(expand(a) + [1], LE, b)
        else:
            lp.add_row(expand(a) + [0], LE, b)
    if not free and dim:
        lp.add_row([1] * dim + [0], LE, 1)

    res = solve_lp(lp, Mode.EXACT)
    if not res.optimal:
        return None, None
    pt = res.point
    z = tuple(pt[i] - pt[dim + i] for i in range(dim)) if free else tuple(pt[:dim])
    return pt[-1], z


def system_nonempty(t) -> bool:
    return t is not None and t > 0
