"""Command line entry point: ``onepool {solve,oracle,cells,gen,bench}``.

Exit codes: 0 ok, 1 disagreement or failed check, 2 invalid input,
3 size guard exceeded, 4 generator could not reach general position.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time

from .arrangement import (buck_bound, build_hyperplanes, cell_bound, enumerate_cells,
                          is_general_position)
from .exactnum import Mode, rat_to_str
from .fileio import InstanceFormatError, dumps_instance, load_instance, report_to_dict
from .generate import GeneralPositionError, generate_instance
from .instance import preprocess, validate
from .oracle import (MAX_SUBSET_OUTPUTS, OracleGuardError, default_resolution, grid_scan,
                     solve_by_subset_enumeration)
from .solver import DEFAULT_MAX_INPUTS, InputCeilingError, InvalidInstanceError, solve_pooling

EXIT_OK, EXIT_DISAGREE, EXIT_INVALID, EXIT_GUARD, EXIT_GENERATOR = 0, 1, 2, 3, 4

DEFAULT_BENCH_SIZES = "2x2x1,2x4x2,2x8x3,3x2x2,3x4x2,3x8x2,4x3x2,4x6x2"
BENCH_HEADER = ["m", "n", "q", "cells", "lps", "pivots", "wall_ms"]


def _fmt_vec(vs):
    return " ".join(rat_to_str(v) for v in vs)


def _fmt_set(js):
    return "{" + ",".join(str(j + 1) for j in js) + "}"


def _load_valid(path):
    """Load and validate, or print the first problem and return None."""
    try:
        inst = load_instance(path)
    except (OSError, InstanceFormatError) as e:
        print(f"error: {e}", file=sys.stderr)
        return None
    rep = validate(inst)
    if not rep.ok:
        print(f"error: invalid instance: {rep.violations[0]}", file=sys.stderr)
        return None
    return inst


def cmd_solve(args) -> int:
    inst = _load_valid(args.instance)
    if inst is None:
        return EXIT_INVALID
    mode = Mode(args.mode)
    t0 = time.perf_counter()
    try:
        sol = solve_pooling(inst, mode, max_inputs=args.max_inputs)
    except InputCeilingError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_GUARD
    except InvalidInstanceError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    wall_ms = (time.perf_counter() - t0) * 1000
    print(f"value = {rat_to_str(sol.value)}")
    print(f"x = {_fmt_vec(sol.flow.x)}")
    print(f"y = {_fmt_vec(sol.flow.y)}")
    print(f"chosen_outputs = {_fmt_set(sol.chosen_outputs)}")
    print(f"removed_outputs = {_fmt_set(sol.removed_outputs)}")
    st = sol.stats
    print(f"cells={st.cells_enumerated} lps={st.lps_solved} pivots={st.pivots_total} "
          f"wall_ms={wall_ms:.1f} mode={mode.value}")
    if args.report:
        with open(args.report, "w") as fh:
            json.dump(report_to_dict(inst, sol, wall_ms), fh, indent=2)
            fh.write("\n")
    return EXIT_OK


def cmd_oracle(args) -> int:
    inst = _load_valid(args.instance)
    if inst is None:
        return EXIT_INVALID
    r = args.grid if args.grid is not None else default_resolution(inst.m)
    try:
        oracle = solve_by_subset_enumeration(inst, max_outputs=args.max_outputs)
        sol = solve_pooling(inst, max_inputs=args.max_inputs)
    except (OracleGuardError, InputCeilingError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_GUARD
    grid_best, grid_z, _ = grid_scan(inst, r)
    print(f"oracle value = {rat_to_str(oracle.value)} via {_fmt_set(oracle.chosen_outputs)}")
    print(f"grid value = {rat_to_str(grid_best)} at z = ({_fmt_vec(grid_z)}) r={r}")
    print(f"solver value = {rat_to_str(sol.value)} via {_fmt_set(sol.chosen_outputs)}")
    agree = sol.value == oracle.value and grid_best >= sol.value
    print("AGREE" if agree else "DISAGREE")
    return EXIT_OK if agree else EXIT_DISAGREE


def cmd_cells(args) -> int:
    inst = _load_valid(args.instance)
    if inst is None:
        return EXIT_INVALID
    reduced, _ = preprocess(inst)
    m, n, q = reduced.m, reduced.n, reduced.q
    hps = build_hyperplanes(reduced)
    cells = enumerate_cells(hps, m, unrestricted=args.unrestricted)
    bound, buck = cell_bound(m, n, q), buck_bound(m, n, q)
    gp = is_general_position(hps, m)
    print(f"cells={len(cells)} bound={bound} buck={buck} gp={'true' if gp else 'false'}")
    for c in cells:
        eps = ";".join("".join(str(e) for e in row) for row in c.eps)
        print(f"eps={eps} witness=({_fmt_vec(c.witness)}) J={_fmt_set(c.reachable)}")
    status = EXIT_OK
    if args.check_bounds and not (len(cells) <= bound <= buck):
        print("bound check FAILED", file=sys.stderr)
        status = EXIT_DISAGREE
    if args.check_gp and not gp:
        print("general position check FAILED", file=sys.stderr)
        status = EXIT_DISAGREE
    return status


def cmd_gen(args) -> int:
    try:
        inst = generate_instance(args.m, args.n, args.q, args.seed,
                                 general_position=args.general_position)
    except GeneralPositionError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_GENERATOR
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    text = dumps_instance(inst)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def parse_sizes(text: str):
    sizes = []
    for item in text.split(","):
        parts = item.strip().lower().split("x")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(f"size {item!r} is not of the form MxNxQ")
        sizes.append(tuple(int(p) for p in parts))
    return sizes


def cmd_bench(args) -> int:
    mode = Mode(args.mode)
    out = open(args.csv, "w", newline="") if args.csv else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(BENCH_HEADER)
        for m, n, q in args.grid_of_sizes:
            inst = generate_instance(m, n, q, args.seed)
            t0 = time.perf_counter()
            sol = solve_pooling(inst, mode, max_inputs=None)
            wall_ms = (time.perf_counter() - t0) * 1000
            st = sol.stats
            writer.writerow([m, n, q, st.cells_enumerated, st.lps_solved, st.pivots_total,
                             f"{wall_ms:.3f}"])
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="onepool", description="Exact one-pool pooling solver")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve an instance file")
    s.add_argument("instance")
    s.add_argument("--mode", choices=["exact", "float"], default="exact")
    s.add_argument("--report", help="write a JSON solve report here")
    s.add_argument("--max-inputs", type=int, default=DEFAULT_MAX_INPUTS)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("oracle", help="cross-check the solver by brute force")
    s.add_argument("instance")
    s.add_argument("--grid", type=int, help="ratio grid resolution (default by m)")
    s.add_argument("--max-outputs", type=int, default=MAX_SUBSET_OUTPUTS)
    s.add_argument("--max-inputs", type=int, default=DEFAULT_MAX_INPUTS)
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("cells", help="enumerate the cells of the quality arrangement")
    s.add_argument("instance")
    s.add_argument("--unrestricted", action="store_true", help="cells of R^(m-1), not just the simplex")
    s.add_argument("--check-bounds", action="store_true")
    s.add_argument("--check-gp", action="store_true")
    s.set_defaults(func=cmd_cells)

    s = sub.add_parser("gen", help="generate a seeded random instance")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--general-position", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("bench", help="time the solver over a grid of sizes")
    s.add_argument("--grid-of-sizes", type=parse_sizes, default=parse_sizes(DEFAULT_BENCH_SIZES),
                   help=f"comma separated MxNxQ list (default {DEFAULT_BENCH_SIZES})")
    s.add_argument("--csv", help="write CSV here instead of stdout")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--mode", choices=["exact", "float"], default="exact")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
