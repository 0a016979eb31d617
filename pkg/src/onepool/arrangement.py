"""Quality hyperplanes in the input-ratio simplex and their cells.

A ratio point ``z`` has ``m - 1`` coordinates (the share of the last input
is implicit). Output ``j`` tolerates quality ``k`` at ``z`` iff
``sum_i (lam[i][k] - lam[m-1][k]) z_i <= mu[j][k] - lam[m-1][k]``. All
hyperplanes for one quality share their normal, so the arrangement is a
union of ``q`` parallel classes and a cell is fixed by choosing, for each
class, the interval between consecutive offsets that ``a_k . z`` falls in.
"""
from __future__ import annotations

import itertools
import math
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import gmpy2

from .instance import PoolingInstance
from .lp import Constraint, solve_max_min_slack, system_nonempty


@dataclass(frozen=True)
class Hyperplane:
    a: tuple
    b: Fraction
    j: int
    k: int

    def value(self, z) -> Fraction:
        return sum((ai * zi for ai, zi in zip(self.a, z)), Fraction(0))

    def side(self, z) -> int:
        """0 on the closed side ``a.z <= b``, 1 on the open side."""
        return 0 if self.value(z) <= self.b else 1


@dataclass(frozen=True)
class Cell:
    eps: tuple  # n rows of q entries in {0, 1}
    witness: tuple
    reachable: tuple  # outputs j with eps[j] all zero


def build_hyperplanes(inst: PoolingInstance) -> list:
    ref = inst.m - 1
    hps = []
    for j in range(inst.n):
        for k in range(inst.q):
            a = tuple(inst.lam[i][k] - inst.lam[ref][k] for i in range(ref))
            hps.append(Hyperplane(a, inst.mu[j][k] - inst.lam[ref][k], j, k))
    return hps


def _dims(hps):
    if not hps:
        return 0, 0
    return max(h.j for h in hps) + 1, max(h.k for h in hps) + 1


def classify_point(z, hps: Sequence[Hyperplane]) -> tuple:
    n, q = _dims(hps)
    eps = [[0] * q for _ in range(n)]
    for h in hps:
        eps[h.j][h.k] = h.side(z)
    return tuple(tuple(r) for r in eps)


def reachable_outputs(eps) -> tuple:
    return tuple(j for j, row in enumerate(eps) if not any(row))


class _ParallelClass:
    def __init__(self, k, members):
        self.k = k
        self.normal = members[0].a
        if any(h.a != self.normal for h in members):
            raise ValueError(f"hyperplanes of quality {k} are not parallel")
        self.offsets = sorted({h.b for h in members})

    def interval(self, z) -> int:
        """Number of offsets strictly below ``a . z``."""
        s = sum((ai * zi for ai, zi in zip(self.normal, z)), Fraction(0))
        return bisect_left(self.offsets, s)

    def constraints(self, r):
        out = []
        if r > 0:
            out.append(Constraint(self.normal, ">", self.offsets[r - 1]))
        if r < len(self.offsets):
            out.append(Constraint(self.normal, "<=", self.offsets[r]))
        return out


def enumerate_cells(hps: Sequence[Hyperplane], m: int, unrestricted: bool = False) -> list:
    """All sign vectors whose cell meets the simplex (or all of R^(m-1) when
    ``unrestricted``), each with an exact witness point.

    Parallel classes are inserted one at a time. Within a cell, the attainable
    intervals of the new class are contiguous (a linear image of a convex set),
    so we extend left and right from the witness's own interval until the
    slack program reports an empty piece.
    """
    dim = m - 1
    n, q = _dims(hps)
    if dim == 0 or not hps:
        z = (Fraction(1, 2 * dim),) * dim if dim else ()
        eps = classify_point(z, hps) if hps else ()
        return [Cell(eps, z, reachable_outputs(eps))]

    domain = "free" if unrestricted else "simplex"
    by_class = {}
    for h in hps:
        by_class.setdefault(h.k, []).append(h)
    classes = [_ParallelClass(k, by_class[k]) for k in sorted(by_class)]

    start = (Fraction(0),) * dim if unrestricted else (Fraction(1, 2 * dim),) * dim
    cells = [((), start)]  # (interval per inserted class, witness)
    for depth, pc in enumerate(classes):
        grown = []
        for intervals, w in cells:
            base = [c for cls, r in zip(classes, intervals) for c in cls.constraints(r)]
            r0 = pc.interval(w)
            found = {r0: w}
            for step in (-1, 1):
                r = r0 + step
                while 0 <= r <= len(pc.offsets):
                    t, z = solve_max_min_slack(base + pc.constraints(r), dim, domain)
                    if not system_nonempty(t):
                        break
                    found[r] = z
                    r += step
            for r in sorted(found):
                grown.append((intervals + (r,), found[r]))
        cells = grown

    result = []
    for intervals, w in cells:
        eps = [[0] * q for _ in range(n)]
        for pc, r in zip(classes, intervals):
            for h in by_class[pc.k]:
                eps[h.j][h.k] = 1 if bisect_left(pc.offsets, h.b) < r else 0
        eps = tuple(tuple(row) for row in eps)
        result.append(Cell(eps, w, reachable_outputs(eps)))
    result.sort(key=lambda c: c.eps)
    return result


def cell_bound(m: int, n: int, q: int) -> int:
    return sum(math.comb(q, i) * n**i for i in range(m))


def buck_bound(m: int, n: int, q: int) -> int:
    return sum(math.comb(n * q, i) for i in range(m))


def _rank(rows) -> int:
    M = [[gmpy2.mpq(v) for v in r] for r in rows]
    if not M:
        return 0
    rank, ncols = 0, len(M[0])
    for c in range(ncols):
        piv = next((i for i in range(rank, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        p = M[rank]
        for i in range(rank + 1, len(M)):
            f = M[i][c] / p[c]
            if f:
                M[i] = [x - f * y for x, y in zip(M[i], p)]
        rank += 1
        if rank == len(M):
            break
    return rank


def _intersection_empty(hs) -> bool:
    A = [list(h.a) for h in hs]
    Ab = [list(h.a) + [h.b] for h in hs]
    return _rank(A) < _rank(Ab)


def is_general_position(hps: Sequence[Hyperplane], m: int) -> bool:
    """General position for parallel classes of hyperplanes in R^(m-1).

    Every ``m`` hyperplanes must have empty intersection, and any ``t <= m-1``
    hyperplanes taken from ``t`` different classes must meet in an affine
    subspace of dimension ``m - 1 - t``. The second condition only depends
    on the class normals: it holds iff those ``t`` normals are independent.
    For ``m >= 2`` no two hyperplanes may coincide either; without that a
    repeated offset can hide behind a third, disjoint parallel hyperplane.
    """
    dim = m - 1
    by_class = {}
    offsets = {}
    for h in hps:
        by_class.setdefault(h.k, h.a)
        offsets.setdefault(h.k, []).append(h.b)
    if dim >= 1 and any(len(set(bs)) != len(bs) for bs in offsets.values()):
        return False
    normals = [by_class[k] for k in sorted(by_class)]
    for t in range(1, min(dim, len(normals)) + 1):
        for combo in itertools.combinations(normals, t):
            if _rank(combo) != t:
                return False

    for subset in itertools.combinations(hps, m):
        disjoint_pair = any(g.k == h.k and g.b != h.b and any(g.a)
                            for g, h in itertools.combinations(subset, 2))
        if disjoint_pair:
            continue
        if not _intersection_empty(subset):
            return False
    return True
