"""JSON instance files and solve reports.

Every number is written as a decimal or ``"p/q"`` string. On input, bare JSON
numbers are also accepted and read from their literal text, so ``0.1`` is one
tenth and not the nearest binary float.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .exactnum import Mode, RationalParseError, rat_from_decimal, rat_to_str
from .instance import Flow, PoolingInstance
from .solver import Solution, SolveStats

VECTOR_KEYS = ("c_in", "c_out", "cap_in", "cap_out", "u_in", "u_out")
MATRIX_KEYS = ("lambda", "mu")


class InstanceFormatError(ValueError):
    pass


def _num(v, where):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        raise InstanceFormatError(f"{where}: expected a number, got a boolean")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return rat_from_decimal(v)
        except RationalParseError as e:
            raise InstanceFormatError(f"{where}: {e}") from None
    raise InstanceFormatError(f"{where}: expected a number, got {type(v).__name__}")


def _int(v, where):
    x = _num(v, where)
    if x.denominator != 1:
        raise InstanceFormatError(f"{where}: expected an integer")
    return int(x)


def instance_from_dict(d: dict) -> PoolingInstance:
    if not isinstance(d, dict):
        raise InstanceFormatError("instance must be a JSON object")
    missing = [k for k in ("m", "n", "q", "cap_pool") + VECTOR_KEYS + MATRIX_KEYS if k not in d]
    if missing:
        raise InstanceFormatError(f"missing keys: {', '.join(missing)}")
    vec = {}
    for key in VECTOR_KEYS:
        if not isinstance(d[key], list):
            raise InstanceFormatError(f"{key}: expected an array")
        vec[key] = tuple(_num(v, f"{key}[{i}]") for i, v in enumerate(d[key]))
    mat = {}
    for key in MATRIX_KEYS:
        rows = d[key]
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise InstanceFormatError(f"{key}: expected an array of arrays")
        mat[key] = tuple(tuple(_num(v, f"{key}[{i}][{k}]") for k, v in enumerate(r))
                         for i, r in enumerate(rows))
    seed = d.get("seed")
    return PoolingInstance(
        m=_int(d["m"], "m"), n=_int(d["n"], "n"), q=_int(d["q"], "q"),
        c_in=vec["c_in"], c_out=vec["c_out"], lam=mat["lambda"], mu=mat["mu"],
        cap_in=vec["cap_in"], cap_pool=_num(d["cap_pool"], "cap_pool"), cap_out=vec["cap_out"],
        u_in=vec["u_in"], u_out=vec["u_out"],
        name=d.get("name"), seed=None if seed is None else _int(seed, "seed"))


def instance_to_dict(inst: PoolingInstance) -> dict:
    s = rat_to_str
    d = {}
    if inst.name is not None:
        d["name"] = inst.name
    if inst.seed is not None:
        d["seed"] = inst.seed
    d.update({
        "m": inst.m, "n": inst.n, "q": inst.q,
        "c_in": [s(v) for v in inst.c_in],
        "c_out": [s(v) for v in inst.c_out],
        "lambda": [[s(v) for v in row] for row in inst.lam],
        "mu": [[s(v) for v in row] for row in inst.mu],
        "cap_in": [s(v) for v in inst.cap_in],
        "cap_pool": s(inst.cap_pool),
        "cap_out": [s(v) for v in inst.cap_out],
        "u_in": [s(v) for v in inst.u_in],
        "u_out": [s(v) for v in inst.u_out],
    })
    return d


def loads_instance(text: str) -> PoolingInstance:
    exact = lambda lit: rat_from_decimal(lit)
    try:
        d = json.loads(text, parse_float=exact, parse_int=exact)
    except json.JSONDecodeError as e:
        raise InstanceFormatError(f"not valid JSON: {e}") from None
    except RationalParseError as e:
        raise InstanceFormatError(str(e)) from None
    return instance_from_dict(d)


def dumps_instance(inst: PoolingInstance) -> str:
    return json.dumps(instance_to_dict(inst), indent=2) + "\n"


def load_instance(path) -> PoolingInstance:
    return loads_instance(Path(path).read_text())


def save_instance(inst: PoolingInstance, path) -> None:
    Path(path).write_text(dumps_instance(inst))


def report_to_dict(inst: PoolingInstance, sol: Solution, wall_ms: float) -> dict:
    """Outputs are numbered from 1 in reports."""
    s = rat_to_str
    p = sol.flow.pool_quality(inst)
    return {
        "value": s(sol.value),
        "x": [s(v) for v in sol.flow.x],
        "y": [s(v) for v in sol.flow.y],
        "p": [s(v) for v in p] if p is not None else [],
        "chosen_outputs": [j + 1 for j in sol.chosen_outputs],
        "removed_outputs": [j + 1 for j in sol.removed_outputs],
        "stats": {
            "cells": sol.stats.cells_enumerated,
            "lps": sol.stats.lps_solved,
            "pivots": sol.stats.pivots_total,
            "wall_ms": round(wall_ms, 3),
        },
        "mode": sol.mode.value,
    }


def solution_from_report(d: dict) -> Solution:
    """Rebuild the checkable part of a solution from a report dictionary."""
    mode = Mode(d.get("mode", "exact"))
    conv = (lambda v: float(rat_from_decimal(v))) if mode is Mode.FLOAT else rat_from_decimal
    flow = Flow(x=tuple(conv(v) for v in d["x"]), y=tuple(conv(v) for v in d["y"]))
    stats = SolveStats(cells_enumerated=d["stats"]["cells"], lps_solved=d["stats"]["lps"],
                       pivots_total=d["stats"]["pivots"])
    return Solution(conv(d["value"]), flow, tuple(j - 1 for j in d["chosen_outputs"]),
                    tuple(j - 1 for j in d.get("removed_outputs", [])), stats, mode)
