"""One-pool pooling instances: data model, validation, preprocessing and
feasibility checks for the P-formulation restricted to a single pool.

Indices are 0-based throughout the Python API.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence

from .exactnum import TAU, Mode


@dataclass(frozen=True)
class PoolingInstance:
    m: int
    n: int
    q: int
    c_in: tuple
    c_out: tuple
    lam: tuple  # m rows of q input quality values
    mu: tuple  # n rows of q output quality upper bounds
    cap_in: tuple
    cap_pool: Fraction
    cap_out: tuple
    u_in: tuple
    u_out: tuple
    name: Optional[str] = None
    seed: Optional[int] = None

    @classmethod
    def build(cls, *, c_in, c_out, lam, mu, cap_in, cap_pool, cap_out, u_in, u_out,
              m=None, n=None, q=None, name=None, seed=None) -> "PoolingInstance":
        """Construct from plain sequences, converting every number to a Fraction.

        Dimensions default to the lengths of ``c_in``, ``c_out`` and ``lam[0]``.
        No shape checking happens here; see :func:`validate`.
        """
        vec = lambda xs: tuple(Fraction(v) for v in xs)
        mat = lambda rows: tuple(vec(r) for r in rows)
        if m is None:
            m = len(c_in)
        if n is None:
            n = len(c_out)
        if q is None:
            q = len(lam[0]) if lam else 0
        return cls(m=m, n=n, q=q, c_in=vec(c_in), c_out=vec(c_out), lam=mat(lam), mu=mat(mu),
                   cap_in=vec(cap_in), cap_pool=Fraction(cap_pool), cap_out=vec(cap_out),
                   u_in=vec(u_in), u_out=vec(u_out), name=name, seed=seed)

    def input_upper(self, i: int) -> Fraction:
        return min(self.cap_in[i], self.u_in[i])

    def output_upper(self, j: int) -> Fraction:
        return min(self.cap_out[j], self.u_out[j])

    def select_outputs(self, keep: Sequence[int]) -> "PoolingInstance":
        keep = list(keep)
        return replace(self, n=len(keep),
                       c_out=tuple(self.c_out[j] for j in keep),
                       mu=tuple(self.mu[j] for j in keep),
                       cap_out=tuple(self.cap_out[j] for j in keep),
                       u_out=tuple(self.u_out[j] for j in keep))


@dataclass(frozen=True)
class Flow:
    x: tuple
    y: tuple

    def pool_quality(self, inst: PoolingInstance):
        """Blended pool quality per quality index, or ``None`` for an empty pool."""
        total = sum(self.y)
        if total == 0:
            return None
        return tuple(sum(inst.lam[i][k] * self.x[i] for i in range(inst.m)) / total
                     for k in range(inst.q))

    @classmethod
    def zero(cls, m: int, n: int) -> "Flow":
        return cls(x=(Fraction(0),) * m, y=(Fraction(0),) * n)


@dataclass(frozen=True)
class Violation:
    constraint: str
    index: tuple
    magnitude: Optional[object] = None

    def __str__(self):
        idx = ",".join(str(i) for i in self.index)
        if self.magnitude is None:
            return f"{self.constraint}[{idx}]"
        return f"{self.constraint}[{idx}] by {self.magnitude}"


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, constraint, index, magnitude=None):
        self.violations.append(Violation(constraint, tuple(index), magnitude))

    def extend(self, other: "ValidationReport"):
        self.violations.extend(other.violations)
        return self

    def __bool__(self):
        return self.ok


def validate(inst: PoolingInstance) -> ValidationReport:
    """Check dimensions and capacity signs. Quality consistency is left to
    :func:`preprocess`."""
    rep = ValidationReport()
    for name, val in (("m", inst.m), ("n", inst.n), ("q", inst.q)):
        if not isinstance(val, int) or val < 1:
            rep.add("dimension", (name,), val)
    if not rep.ok:
        return rep

    for name, length in (("c_in", inst.m), ("c_out", inst.n), ("cap_in", inst.m),
                         ("cap_out", inst.n), ("u_in", inst.m), ("u_out", inst.n)):
        if len(getattr(inst, name)) != length:
            rep.add("shape", (name,))
    for name, rows in (("lambda", inst.m), ("mu", inst.n)):
        mat = inst.lam if name == "lambda" else inst.mu
        if len(mat) != rows or any(len(r) != inst.q for r in mat):
            rep.add("shape", (name,))

    for name in ("cap_in", "cap_out", "u_in", "u_out"):
        for i, v in enumerate(getattr(inst, name)):
            if v < 0:
                rep.add("capacity-nonnegative", (name, i), -v)
    if inst.cap_pool < 0:
        rep.add("capacity-nonnegative", ("pool",), -inst.cap_pool)
    return rep


def unreachable_outputs(inst: PoolingInstance) -> list:
    """Outputs with a quality bound below every input's quality value."""
    lo = [min(inst.lam[i][k] for i in range(inst.m)) for k in range(inst.q)]
    return [j for j in range(inst.n) if any(lo[k] > inst.mu[j][k] for k in range(inst.q))]


def preprocess(inst: PoolingInstance):
    """Drop outputs that can never receive flow.

    Returns ``(reduced, removed)`` where ``removed`` lists original output
    indices. The reduced instance satisfies ``min_i lam[i][k] <= mu[j][k]``
    for every remaining output and quality. It may have ``n == 0``.
    """
    removed = unreachable_outputs(inst)
    if not removed:
        return inst, []
    keep = [j for j in range(inst.n) if j not in removed]
    return inst.select_outputs(keep), removed


def objective(inst: PoolingInstance, f: Flow):
    return (sum(c * x for c, x in zip(inst.c_in, f.x)) +
            sum(c * y for c, y in zip(inst.c_out, f.y)))


def _excess(lhs, rhs, mode: Mode):
    """Positive amount by which ``lhs <= rhs`` fails, else ``None``."""
    d = lhs - rhs
    if mode is Mode.FLOAT:
        return d if d > TAU * max(1.0, abs(float(rhs))) else None
    return d if d > 0 else None


def check_flow_feasible(inst: PoolingInstance, f: Flow, mode: Mode = Mode.EXACT) -> ValidationReport:
    """Conservation at the pool, vertex capacities, arc capacities, nonnegativity."""
    rep = ValidationReport()
    if len(f.x) != inst.m or len(f.y) != inst.n:
        rep.add("shape", ("flow",))
        return rep
    for i, v in enumerate(f.x):
        if (d := _excess(0, v, mode)) is not None:
            rep.add("nonneg", ("x", i), d)
    for j, v in enumerate(f.y):
        if (d := _excess(0, v, mode)) is not None:
            rep.add("nonneg", ("y", j), d)

    inflow, outflow = sum(f.x), sum(f.y)
    gap = abs(inflow - outflow)
    if (gap > TAU * max(1.0, float(abs(inflow)))) if mode is Mode.FLOAT else gap != 0:
        rep.add("Eq1", ("pool",), gap)

    for i, v in enumerate(f.x):
        if (d := _excess(v, inst.cap_in[i], mode)) is not None:
            rep.add("Eq2", (i,), d)
    if (d := _excess(inflow, inst.cap_pool, mode)) is not None:
        rep.add("Eq3", ("pool",), d)
    for j, v in enumerate(f.y):
        if (d := _excess(v, inst.cap_out[j], mode)) is not None:
            rep.add("Eq4", (j,), d)
    for i, v in enumerate(f.x):
        if (d := _excess(v, inst.u_in[i], mode)) is not None:
            rep.add("Eq5", ("in", i), d)
    for j, v in enumerate(f.y):
        if (d := _excess(v, inst.u_out[j], mode)) is not None:
            rep.add("Eq5", ("out", j), d)
    return rep


def check_quality_feasible(inst: PoolingInstance, f: Flow, mode: Mode = Mode.EXACT) -> ValidationReport:
    """Pool blending and output quality bounds.

    The pool quality is ``sum_i lam[i][k] x_i / sum_j y_j``; every output with
    positive flow must see it below ``mu[j][k]``. An empty pool is feasible.
    """
    rep = ValidationReport()
    total = sum(f.y)
    positive = (lambda v: v > TAU) if mode is Mode.FLOAT else (lambda v: v > 0)
    if not positive(total):
        return rep
    p = [sum(inst.lam[i][k] * f.x[i] for i in range(inst.m)) / total for k in range(inst.q)]
    for j in range(inst.n):
        if not positive(f.y[j]):
            continue
        for k in range(inst.q):
            if (d := _excess(p[k], inst.mu[j][k], mode)) is not None:
                rep.add("Eq7", (j, k), d)
    return rep
