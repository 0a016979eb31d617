"""Brute-force cross-checks for the solver.

``solve_by_subset_enumeration`` never touches the arrangement code: it solves
LP(J') for every subset of outputs. ``grid_scan`` fixes the input ratio on a
lattice of the simplex, which only ever over-estimates the optimum.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

from .arrangement import build_hyperplanes, classify_point
from .exactnum import Mode
from .instance import (Flow, PoolingInstance, ValidationReport, check_flow_feasible,
                       check_quality_feasible, objective, validate)
from .lp import solve_lp
from .solver import (InvalidInstanceError, Solution, SolveStats, best_candidate,
                     build_lp_for_outputs, solve_fixed_ratio)

MAX_SUBSET_OUTPUTS = 20


class OracleGuardError(ValueError):
    pass


def solve_by_subset_enumeration(inst: PoolingInstance, max_outputs: int = MAX_SUBSET_OUTPUTS) -> Solution:
    report = validate(inst)
    if not report.ok:
        raise InvalidInstanceError(report)
    if inst.n > max_outputs:
        raise OracleGuardError(f"n = {inst.n} outputs exceeds the 2^n guard of {max_outputs}")
    m, n = inst.m, inst.n
    stats = SolveStats()
    zero = Fraction(0)
    candidates = [(zero, (), Flow.zero(m, n))]
    for size in range(n + 1):
        for outs in itertools.combinations(range(n), size):
            lp = build_lp_for_outputs(inst, outs)
            res = solve_lp(lp)
            stats.lps_solved += 1
            stats.pivots_total += res.pivot_count
            stats.lp_shapes.add((lp.num_vars, lp.num_rows))
            if res.optimal:
                flow = Flow(tuple(res.point[:m]), tuple(res.point[m:]))
                candidates.append((res.value, outs, flow))
    stats.distinct_output_sets = stats.lps_solved
    value, chosen, flow = best_candidate(candidates)
    return Solution(objective(inst, flow), flow, chosen, (), stats)


def simplex_grid(dim: int, r: int):
    """All ``z`` with ``z_i = t_i / r``, integer ``t_i >= 0`` and ``sum t_i <= r``."""
    def rec(prefix, left):
        if len(prefix) == dim:
            yield tuple(Fraction(t, r) for t in prefix)
            return
        for t in range(left + 1):
            yield from rec(prefix + (t,), left - t)
    yield from rec((), r)


def default_resolution(m: int) -> int:
    if m <= 3:
        return 16
    if m == 4:
        return 8
    return 4


def grid_scan(inst: PoolingInstance, r: int):
    """Return ``(best_value, best_z, sign_vectors_seen)`` over the ratio grid."""
    if r < 1:
        raise ValueError("grid resolution must be >= 1")
    hps = build_hyperplanes(inst)
    best_value, best_z = None, None
    seen = set()
    for z in simplex_grid(inst.m - 1, r):
        seen.add(classify_point(z, hps))
        value, _, _ = solve_fixed_ratio(inst, z)
        if best_value is None or value < best_value:
            best_value, best_z = value, z
    return best_value, best_z, seen


def verify_solution(inst: PoolingInstance, sol: Solution, mode: Mode = Mode.EXACT) -> ValidationReport:
    rep = check_flow_feasible(inst, sol.flow, mode)
    if rep.ok:
        rep.extend(check_quality_feasible(inst, sol.flow, mode))
    recomputed = objective(inst, sol.flow)
    if mode is Mode.EXACT:
        if recomputed != sol.value:
            rep.add("objective", (), abs(recomputed - sol.value))
    elif abs(recomputed - sol.value) > 1e-6 * max(1.0, abs(float(recomputed))):
        rep.add("objective", (), abs(recomputed - sol.value))
    chosen = set(sol.chosen_outputs)
    for j, y in enumerate(sol.flow.y):
        if j not in chosen and y != 0:
            rep.add("closed-output", (j,), y)
    return rep
