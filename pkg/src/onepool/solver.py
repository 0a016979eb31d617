"""Exact global solver for the one-pool pooling problem.

The reachable output set is constant on each cell of the quality
arrangement, so it suffices to solve one LP per distinct reachable set and
keep the cheapest. With a fixed number of inputs the number of cells, and so
the number of LPs, is polynomial in the number of outputs and qualities.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .arrangement import build_hyperplanes, classify_point, enumerate_cells, reachable_outputs
from .exactnum import Mode
from .instance import (Flow, PoolingInstance, ValidationReport, objective, preprocess,
                       validate)
from .lp import EQ, LE, LinearProgram, LpResult, solve_lp

log = logging.getLogger(__name__)

DEFAULT_MAX_INPUTS = 6


class InvalidInstanceError(ValueError):
    def __init__(self, report: ValidationReport):
        self.report = report
        first = report.violations[0] if report.violations else "unknown"
        super().__init__(f"invalid instance: {first}")


class InputCeilingError(ValueError):
    pass


@dataclass
class SolveStats:
    cells_enumerated: int = 0
    lps_solved: int = 0
    distinct_output_sets: int = 0
    pivots_total: int = 0
    lp_shapes: set = field(default_factory=set)  # (num_vars, num_rows) of each LP built


@dataclass
class Solution:
    value: object
    flow: Flow
    chosen_outputs: tuple
    removed_outputs: tuple = ()
    stats: SolveStats = field(default_factory=SolveStats)
    mode: Mode = Mode.EXACT


def _flow_bounds(inst: PoolingInstance, lp: LinearProgram, open_outputs: Iterable[int]):
    """Append the flow constraints shared by every LP over ``x_0..x_{m-1}, y_0..y_{n-1}``.

    Rows: pool conservation, input capacities, pool capacity, output
    capacities. Arc capacities become variable bounds; outputs outside
    ``open_outputs`` get upper bound 0.
    """
    m, n = inst.m, inst.n
    open_outputs = set(open_outputs)
    lp.add_row([1] * m + [-1] * n, EQ, 0)
    for i in range(m):
        lp.add_row([1 if r == i else 0 for r in range(m)] + [0] * n, LE, inst.cap_in[i])
    lp.add_row([1] * m + [0] * n, LE, inst.cap_pool)
    for j in range(n):
        lp.add_row([0] * m + [1 if r == j else 0 for r in range(n)], LE, inst.cap_out[j])
    lp.upper = tuple(inst.u_in) + tuple(inst.u_out[j] if j in open_outputs else Fraction(0)
                                        for j in range(n))


def build_lp_for_outputs(inst: PoolingInstance, outputs: Iterable[int]) -> LinearProgram:
    """LP(J'): route flow only to ``outputs`` and enforce their quality bounds.

    Always ``m + n`` variables and ``m + n(q+1) + 2`` rows; quality rows of
    closed outputs are padded as ``0 <= 0``.
    """
    m, n, q = inst.m, inst.n, inst.q
    outputs = set(outputs)
    lp = LinearProgram(m + n, tuple(inst.c_in) + tuple(inst.c_out))
    _flow_bounds(inst, lp, outputs)
    ref = m - 1
    for j in range(n):
        for k in range(q):
            if j not in outputs:
                lp.add_row([0] * (m + n), LE, 0)
                continue
            # sum_{i<m} (lam_ik - lam_mk) x_i <= (mu_jk - lam_mk) sum_i x_i, collected per x_i
            shift = inst.mu[j][k] - inst.lam[ref][k]
            coeffs = [inst.lam[i][k] - inst.lam[ref][k] - shift for i in range(ref)] + [-shift]
            lp.add_row(coeffs + [0] * n, LE, 0)
    return lp


def _flow_from_point(inst, point) -> Flow:
    return Flow(x=tuple(point[:inst.m]), y=tuple(point[inst.m:inst.m + inst.n]))


def val(inst: PoolingInstance, outputs: Iterable[int], mode: Mode = Mode.EXACT) -> LpResult:
    """Optimal value of LP(J'); the result carries the status and point."""
    return solve_lp(build_lp_for_outputs(inst, outputs), mode)


def solve_fixed_ratio(inst: PoolingInstance, z, mode: Mode = Mode.EXACT):
    """Cheapest flow whose input shares equal ``z`` (last share implied).

    Only outputs tolerating the blend at ``z`` are opened. Returns
    ``(value, flow, lp_result)``; the LP is always feasible (zero flow).
    """
    m, n = inst.m, inst.n
    z = tuple(Fraction(v) for v in z)
    ratio = z + (1 - sum(z, Fraction(0)),)
    hps = build_hyperplanes(inst)
    opened = reachable_outputs(classify_point(z, hps)) if n else ()
    lp = LinearProgram(m + n, tuple(inst.c_in) + tuple(inst.c_out))
    _flow_bounds(inst, lp, opened)
    for i in range(m):
        lp.add_row([(1 if r == i else 0) - ratio[i] for r in range(m)] + [0] * n, EQ, 0)
    res = solve_lp(lp, mode)
    return res.value, _flow_from_point(inst, res.point), res


def best_candidate(candidates):
    """Minimum value; ties go to the lexicographically smallest output set."""
    return min(candidates, key=lambda c: (c[0], c[1]))


def _expand(inst: PoolingInstance, reduced: PoolingInstance, kept, flow: Flow, mode) -> Flow:
    zero = Fraction(0) if mode is Mode.EXACT else 0.0
    y = [zero] * inst.n
    for r, j in enumerate(kept):
        y[j] = flow.y[r]
    return Flow(x=flow.x, y=tuple(y))


def solve_pooling(inst: PoolingInstance, mode: Mode = Mode.EXACT,
                  max_inputs: Optional[int] = DEFAULT_MAX_INPUTS) -> Solution:
    report = validate(inst)
    if not report.ok:
        raise InvalidInstanceError(report)
    if max_inputs is not None and inst.m > max_inputs:
        raise InputCeilingError(
            f"m = {inst.m} inputs exceeds the ceiling of {max_inputs}; the number of "
            f"cells grows like n^(m-1), raise --max-inputs to run anyway")

    reduced, removed = preprocess(inst)
    kept = [j for j in range(inst.n) if j not in removed]
    stats = SolveStats()
    zero = Fraction(0) if mode is Mode.EXACT else 0.0
    trivial = (zero, (), Flow((zero,) * reduced.m, (zero,) * reduced.n))
    candidates = [trivial]

    if reduced.n:
        cells = enumerate_cells(build_hyperplanes(reduced), reduced.m)
        stats.cells_enumerated = len(cells)
        output_sets = sorted({c.reachable for c in cells})
        stats.distinct_output_sets = len(output_sets)
        for outs in output_sets:
            lp = build_lp_for_outputs(reduced, outs)
            stats.lp_shapes.add((lp.num_vars, lp.num_rows))
            res = solve_lp(lp, mode)
            stats.lps_solved += 1
            stats.pivots_total += res.pivot_count
            if res.optimal:
                flow = _flow_from_point(reduced, res.point)
                candidates.append((res.value, tuple(kept[j] for j in outs), flow))
        log.debug("%d cells, %d LPs", stats.cells_enumerated, stats.lps_solved)

    value, chosen, flow = best_candidate(candidates)
    flow = _expand(inst, reduced, kept, flow, mode)
    if mode is Mode.EXACT:
        value = objective(inst, flow)
    return Solution(value, flow, tuple(chosen), tuple(removed), stats, mode)
