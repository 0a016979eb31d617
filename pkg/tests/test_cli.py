import csv
import json
from dataclasses import replace
from fractions import Fraction

import pytest

from onepool import cli
from onepool.arrangement import cell_bound
from onepool.exactnum import Mode
from onepool.fileio import (InstanceFormatError, dumps_instance, instance_to_dict, load_instance,
                            loads_instance, save_instance, solution_from_report)
from onepool.generate import generate_instance
from onepool.instance import validate, unreachable_outputs
from onepool.oracle import verify_solution
from onepool.solver import solve_pooling

from conftest import INSTANCES, make_w1


def run(argv, capsys):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_w1_file_matches_worked_instance(w1_path):
    assert load_instance(w1_path) == make_w1()


def test_solve_w1(w1_path, tmp_path, capsys):
    report = tmp_path / "r.json"
    code, out, _ = run(["solve", w1_path, "--report", report], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "value = -35"
    assert "x = 5 5" in lines and "y = 10" in lines and "chosen_outputs = {1}" in lines
    got = json.loads(report.read_text())
    golden = json.loads((INSTANCES / "w1.report.json").read_text())
    got["stats"].pop("wall_ms")
    golden["stats"].pop("wall_ms")
    assert got == golden


def test_golden_report_reverifies(w1_path):
    inst = load_instance(w1_path)
    sol = solution_from_report(json.loads((INSTANCES / "w1.report.json").read_text()))
    assert sol.value == -35
    assert verify_solution(inst, sol).ok


def test_solve_float_mode(w1_path, tmp_path, capsys):
    report = tmp_path / "r.json"
    code, out, _ = run(["solve", w1_path, "--mode", "float", "--report", report], capsys)
    assert code == 0 and out.startswith("value = -35.0")
    d = json.loads(report.read_text())
    assert d["mode"] == "float"
    sol = solution_from_report(d)
    assert verify_solution(load_instance(w1_path), sol, Mode.FLOAT).ok


def test_solve_invalid_capacity(tmp_path, capsys):
    path = tmp_path / "bad.json"
    save_instance(make_w1(cap_pool=-1), path)
    code, _, err = run(["solve", path], capsys)
    assert code == 2 and "capacity-nonnegative" in err


def test_solve_malformed_file(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"m": 2}')
    code, _, err = run(["solve", path], capsys)
    assert code == 2 and "missing keys" in err
    path.write_text("not json")
    assert run(["solve", path], capsys)[0] == 2
    assert run(["solve", tmp_path / "missing.json"], capsys)[0] == 2


def test_solve_input_ceiling(tmp_path, capsys):
    path = tmp_path / "big.json"
    save_instance(generate_instance(9, 2, 1, 0), path)
    code, _, err = run(["solve", path], capsys)
    assert code == 3 and "ceiling" in err


def test_oracle_w1(w1_path, capsys):
    code, out, _ = run(["oracle", w1_path], capsys)
    assert code == 0 and out.splitlines()[-1] == "AGREE"
    assert "oracle value = -35" in out


def test_oracle_seeded_batch(tmp_path, capsys):
    for seed in range(6):
        path = tmp_path / f"g{seed}.json"
        save_instance(generate_instance(1 + seed % 3, 3, 2, seed), path)
        code, out, _ = run(["oracle", path, "--grid", 4], capsys)
        assert code == 0 and "AGREE" in out


def test_oracle_detects_injected_bug(w1_path, capsys, monkeypatch):
    real = cli.solve_pooling

    def broken(inst, *args, **kwargs):
        sol = real(inst, *args, **kwargs)
        return replace(sol, value=sol.value + 1)

    monkeypatch.setattr(cli, "solve_pooling", broken)
    code, out, _ = run(["oracle", w1_path], capsys)
    assert code == 1 and "DISAGREE" in out


def test_oracle_guard(tmp_path, capsys):
    path = tmp_path / "wide.json"
    save_instance(generate_instance(1, 4, 1, 0), path)
    assert run(["oracle", path, "--max-outputs", 3], capsys)[0] == 3


def test_cells_w1(w1_path, capsys):
    code, out, _ = run(["cells", w1_path, "--check-bounds", "--check-gp"], capsys)
    assert code == 0
    assert out.splitlines()[0] == "cells=2 bound=2 buck=2 gp=true"
    assert "eps=0 witness=(1/2) J={1}" in out and "eps=1 witness=(1) J={}" in out


def test_cells_unrestricted_general_position(tmp_path, capsys):
    path = tmp_path / "gp.json"
    assert run(["gen", "--m", 3, "--n", 2, "--q", 2, "--seed", 5, "--general-position",
                "--out", path], capsys)[0] == 0
    code, out, _ = run(["cells", path, "--unrestricted", "--check-bounds", "--check-gp"], capsys)
    assert code == 0
    assert out.startswith("cells=9 bound=9 buck=11 gp=true")


def test_cells_duplicate_mu(tmp_path, capsys):
    path = tmp_path / "dup.json"
    save_instance(make_w1(c_out=[-5, -4], mu=[[2], [2]], cap_out=[10, 10], u_out=[10, 10]), path)
    code, out, _ = run(["cells", path], capsys)
    assert code == 0 and "gp=false" in out.splitlines()[0]
    assert run(["cells", path, "--check-gp"], capsys)[0] == 1


def test_gen_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert run(["gen", "--m", 2, "--n", 1, "--q", 1, "--seed", 7, "--out", p], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    code, out, _ = run(["gen", "--m", 2, "--n", 1, "--q", 1, "--seed", 7], capsys)
    assert out == a.read_text()


def test_gen_bad_dimensions(capsys):
    assert run(["gen", "--m", 0, "--n", 1, "--q", 1], capsys)[0] == 2


def test_gen_general_position_failure(capsys, monkeypatch):
    monkeypatch.setattr("onepool.generate.is_general_position", lambda hps, m: False)
    code, _, err = run(["gen", "--m", 2, "--n", 2, "--q", 1, "--general-position"], capsys)
    assert code == 4 and "1000" in err


def test_generated_batch_valid():
    for seed in range(40):
        inst = generate_instance(1 + seed % 4, 1 + seed % 7, 1 + seed % 3, seed)
        assert validate(inst).ok and unreachable_outputs(inst) == []
        for row in inst.lam + inst.mu:
            assert all(0 <= v <= 10 and v.denominator <= 64 for v in row)
        assert all(0 <= c <= 5 for c in inst.c_in) and all(-10 <= c <= 0 for c in inst.c_out)
        caps = inst.cap_in + inst.cap_out + inst.u_in + inst.u_out + (inst.cap_pool,)
        assert all(1 <= c <= 20 for c in caps)


def test_bench_csv(tmp_path, capsys):
    path = tmp_path / "bench.csv"
    code, _, _ = run(["bench", "--grid-of-sizes", "2x3x2,3x3x2,1x2x1", "--csv", path], capsys)
    assert code == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "m,n,q,cells,lps,pivots,wall_ms"
    rows = list(csv.DictReader(lines))
    assert len(rows) == 3
    for r in rows:
        assert int(r["cells"]) <= cell_bound(int(r["m"]), int(r["n"]), int(r["q"]))
        assert int(r["lps"]) <= int(r["cells"])


def test_bench_default_grid_stdout(capsys):
    code, out, _ = run(["bench"], capsys)
    assert code == 0 and out.splitlines()[0] == "m,n,q,cells,lps,pivots,wall_ms"
    assert len(out.splitlines()) == 1 + len(cli.parse_sizes(cli.DEFAULT_BENCH_SIZES))


def test_file_round_trip():
    for seed in range(10):
        inst = generate_instance(3, 4, 2, seed)
        assert loads_instance(dumps_instance(inst)) == inst


def test_bare_numbers_are_exact():
    d = instance_to_dict(make_w1())
    text = json.dumps(d).replace('"cap_pool": "10"', '"cap_pool": 0.1')
    inst = loads_instance(text)
    assert inst.cap_pool == Fraction(1, 10)
    assert '"cap_pool": "1/10"' in dumps_instance(inst)


def test_bad_literal_rejected():
    d = instance_to_dict(make_w1())
    d["c_in"] = ["1", "two"]
    with pytest.raises(InstanceFormatError, match="c_in"):
        loads_instance(json.dumps(d))
    d["c_in"] = ["1", "1/0"]
    with pytest.raises(InstanceFormatError):
        loads_instance(json.dumps(d))


def test_reports_self_certify(tmp_path, capsys):
    for seed in range(5):
        inst = generate_instance(2 + seed % 3, 4, 2, seed)
        path, report = tmp_path / "i.json", tmp_path / "r.json"
        save_instance(inst, path)
        assert run(["solve", path, "--report", report], capsys)[0] == 0
        sol = solution_from_report(json.loads(report.read_text()))
        assert verify_solution(inst, sol).ok
        assert sol.value == solve_pooling(inst).value
