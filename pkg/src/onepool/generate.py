"""Seeded random instances.

Values are rationals with denominators up to 64 drawn uniformly from:
qualities and bounds in [0, 10], input costs in [0, 5], output costs in
[-10, 0], capacities in [1, 20]. Output bounds below the cheapest quality
are raised to it, so no output is unreachable.
"""
from __future__ import annotations

import random
from fractions import Fraction

from .arrangement import build_hyperplanes, is_general_position
from .instance import PoolingInstance

MAX_DENOMINATOR = 64
GP_RETRIES = 1000


class GeneralPositionError(RuntimeError):
    pass


def _draw(rng: random.Random, lo: int, hi: int) -> Fraction:
    d = rng.randint(1, MAX_DENOMINATOR)
    return Fraction(rng.randint(lo * d, hi * d), d)


def _draw_instance(rng: random.Random, m: int, n: int, q: int) -> dict:
    lam = [[_draw(rng, 0, 10) for _ in range(q)] for _ in range(m)]
    mu = [[_draw(rng, 0, 10) for _ in range(q)] for _ in range(n)]
    floor = [min(lam[i][k] for i in range(m)) for k in range(q)]
    mu = [[max(row[k], floor[k]) for k in range(q)] for row in mu]
    return dict(
        c_in=[_draw(rng, 0, 5) for _ in range(m)],
        c_out=[_draw(rng, -10, 0) for _ in range(n)],
        lam=lam, mu=mu,
        cap_in=[_draw(rng, 1, 20) for _ in range(m)],
        cap_pool=_draw(rng, 1, 20),
        cap_out=[_draw(rng, 1, 20) for _ in range(n)],
        u_in=[_draw(rng, 1, 20) for _ in range(m)],
        u_out=[_draw(rng, 1, 20) for _ in range(n)],
    )


def generate_instance(m: int, n: int, q: int, seed: int, general_position: bool = False,
                      retries: int = GP_RETRIES) -> PoolingInstance:
    """Deterministic in ``(m, n, q, seed, general_position)``.

    With ``general_position`` the draw is repeated from the same stream until
    the quality arrangement is in general position.
    """
    if min(m, n, q) < 1:
        raise ValueError("m, n and q must be positive")
    rng = random.Random(seed)
    name = f"gen-m{m}-n{n}-q{q}-s{seed}" + ("-gp" if general_position else "")
    for _ in range(retries if general_position else 1):
        inst = PoolingInstance.build(m=m, n=n, q=q, name=name, seed=seed,
                                     **_draw_instance(rng, m, n, q))
        if not general_position or is_general_position(build_hyperplanes(inst), m):
            return inst
    raise GeneralPositionError(f"no general-position draw within {retries} attempts")
