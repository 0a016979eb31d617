import random
from fractions import Fraction

import pytest

from onepool.exactnum import Mode
from onepool.lp import (EQ, GE, LE, Constraint, LinearProgram, LpStatus, Row, solve_lp,
                        solve_max_min_slack, system_nonempty)
from onepool.solver import build_lp_for_outputs

from lp_oracle import brute_force_lp, random_lp

PIVOT_CAP = 10**6


def row_holds(row, point):
    lhs = sum(Fraction(a) * x for a, x in zip(row.coeffs, point))
    return {LE: lhs <= row.rhs, GE: lhs >= row.rhs, EQ: lhs == row.rhs}[row.rel]


def test_simple_max():
    res = solve_lp(LinearProgram(1, (-1,), [Row((1,), LE, 5)]))
    assert res.status is LpStatus.OPTIMAL
    assert res.value == -5 and res.point == (5,)


def test_simple_infeasible():
    assert solve_lp(LinearProgram(1, (1,), [Row((1,), LE, -1)])).status is LpStatus.INFEASIBLE


def test_unbounded():
    lp = LinearProgram(2, (-1, 0), [Row((1, -1), LE, 1)])
    assert solve_lp(lp).status is LpStatus.UNBOUNDED


def test_upper_bound_as_bound():
    res = solve_lp(LinearProgram(2, (-1, -1), [Row((1, 2), LE, 10)], (4, None)))
    assert res.value == -7 and res.point == (4, 3)


def test_w1_lp_matches_vertex_enumeration(w1):
    lp = build_lp_for_outputs(w1, [0])
    status, value = brute_force_lp(lp)
    assert (status, value) == (LpStatus.OPTIMAL, -35)
    res = solve_lp(lp)
    assert res.value == -35 and res.point == (5, 5, 10)


def test_beale_cycling_example_terminates():
    # classic instance on which Dantzig's rule with naive ties cycles
    lp = LinearProgram(4, (Fraction(-3, 4), 20, Fraction(-1, 2), 6), [
        Row((Fraction(1, 4), -8, -1, 9), LE, 0),
        Row((Fraction(1, 2), -12, Fraction(-1, 2), 3), LE, 0),
        Row((0, 0, 1, 0), LE, 1),
    ])
    res = solve_lp(lp)
    assert res.value == Fraction(-5, 4)
    assert res.pivot_count < 50


def test_redundant_equalities():
    lp = LinearProgram(2, (1, 2), [Row((1, 1), EQ, 3), Row((2, 2), EQ, 6), Row((1, 0), LE, 2)])
    res = solve_lp(lp)
    assert res.value == 4 and res.point == (2, 1)


def test_fixed_variables_are_zero():
    lp = LinearProgram(3, (-1, -1, -1), [Row((1, 1, 1), LE, 9)], (0, None, 0))
    res = solve_lp(lp)
    assert res.point == (0, 9, 0)


def test_negative_upper_bound_infeasible():
    assert solve_lp(LinearProgram(1, (1,), [], (-1,))).status is LpStatus.INFEASIBLE


def test_float_mode_w1(w1):
    res = solve_lp(build_lp_for_outputs(w1, [0]), Mode.FLOAT)
    assert res.value == pytest.approx(-35)
    assert isinstance(res.value, float)


@pytest.mark.parametrize("seed", range(8))
def test_agrees_with_vertex_enumeration(seed):
    rng = random.Random(seed)
    for _ in range(25):
        lp = random_lp(rng)
        status, value = brute_force_lp(lp)
        res = solve_lp(lp)
        assert res.status is status
        assert res.pivot_count <= PIVOT_CAP
        if status is LpStatus.OPTIMAL:
            assert res.value == value
            assert all(row_holds(r, res.point) for r in lp.rows)
            assert all(x >= 0 for x in res.point)
            assert all(u is None or x <= u for x, u in zip(res.point, lp.upper))


def test_float_tracks_exact():
    rng = random.Random(99)
    for _ in range(150):
        lp = random_lp(rng)
        ex, fl = solve_lp(lp), solve_lp(lp, Mode.FLOAT)
        assert ex.status is fl.status
        if ex.optimal:
            assert abs(fl.value - float(ex.value)) <= 1e-6 * max(1, abs(float(ex.value)))


def test_max_min_slack_strict_side():
    t, z = solve_max_min_slack([Constraint((2,), ">", 1)], 1)
    assert t == Fraction(1, 2) and z == (1,)
    assert system_nonempty(t)


def test_max_min_slack_weak_side():
    t, z = solve_max_min_slack([Constraint((2,), "<=", 1)], 1)
    assert system_nonempty(t) and z == (0,)


def test_max_min_slack_contradiction():
    t, _ = solve_max_min_slack([Constraint((1,), ">", Fraction(1, 2)),
                                Constraint((1,), "<=", Fraction(1, 2))], 1)
    assert t is not None and t <= 0
    assert not system_nonempty(t)


def test_max_min_slack_weakly_infeasible():
    t, z = solve_max_min_slack([Constraint((1,), ">=", 2)], 1)
    assert t is None and z is None


def test_max_min_slack_free_domain():
    t, z = solve_max_min_slack([Constraint((1, 1), ">", 5), Constraint((1, -1), "<", -7)], 2, "free")
    assert system_nonempty(t)
    assert z[0] + z[1] > 5 and z[0] - z[1] < -7


def test_max_min_slack_witness_is_strict():
    rng = random.Random(5)
    for _ in range(60):
        cons = [Constraint((rng.randint(-3, 3), rng.randint(-3, 3)), rng.choice(["<=", "<", ">", ">="]),
                           Fraction(rng.randint(-4, 4), 4)) for _ in range(3)]
        t, z = solve_max_min_slack(cons, 2)
        if not system_nonempty(t):
            continue
        assert z[0] >= 0 and z[1] >= 0 and z[0] + z[1] <= 1
        for c in cons:
            v = c.coeffs[0] * z[0] + c.coeffs[1] * z[1]
            assert {"<=": v <= c.rhs, "<": v < c.rhs, ">": v > c.rhs, ">=": v >= c.rhs}[c.rel]


def test_linear_program_shape_checks():
    with pytest.raises(ValueError):
        LinearProgram(2, (1, 2), [Row((1,), LE, 1)])
    with pytest.raises(ValueError):
        LinearProgram(1, (1,), [Row((1,), "<", 1)])
