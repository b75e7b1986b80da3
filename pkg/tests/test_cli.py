import csv
import io
import json
import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from conftest import random_mass
from fastmobius.cli import main
from fastmobius.cost import cost_table
from fastmobius.evidence import combine_to_plausibility
from fastmobius.setfun import Frame, Kind, SetFunction, load_setfunction, save_setfunction

DATA = Path(__file__).parent / "data"


def run(*argv):
    """Call the CLI in-process; returns (exit status, stdout)."""
    out = io.StringIO()
    return main([str(a) for a in argv], out=out), out.getvalue()


@pytest.fixture
def pair(tmp_path, rng):
    frame = Frame.of_size(4)
    paths = []
    for name in ("m1.json", "m2.json"):
        p = tmp_path / name
        save_setfunction(random_mass(frame, rng), p)
        paths.append(p)
    return paths


def test_transform_matches_expected_file(tmp_path):
    out = tmp_path / "bel.json"
    status, _ = run("transform", "--from", "mass", "--to", "bel", "--in", DATA / "mass_n3.json", "--out", out)
    assert status == 0
    got, expected = load_setfunction(out), load_setfunction(DATA / "bel_n3_expected.json")
    assert got.kind is Kind.BELIEF
    np.testing.assert_allclose(got.values, expected.values, atol=1e-12)


def test_transform_identity(tmp_path):
    out = tmp_path / "copy.json"
    assert run("transform", "--from", "mass", "--to", "mass", "--in", DATA / "mass_n3.json", "--out", out)[0] == 0
    assert load_setfunction(out).allclose(load_setfunction(DATA / "mass_n3.json"), 0)


def test_unsupported_conversion(tmp_path, capsys):
    status, _ = run("transform", "--from", "bel", "--to", "pl", "--in", DATA / "bel_n3_expected.json",
                    "--out", tmp_path / "x.json")
    assert status == 4
    err = capsys.readouterr().err
    assert err.startswith("fastmobius: error[unsupported-conversion]:")
    assert "mass->bel" in err and "q->pl" in err


def test_kind_must_match_from(tmp_path, capsys):
    status, _ = run("transform", "--from", "q", "--to", "mass", "--in", DATA / "mass_n3.json",
                    "--out", tmp_path / "x.json")
    assert status == 3
    assert "error[parse-error]" in capsys.readouterr().err


@pytest.mark.parametrize("algo", ["fast", "naive"])
@pytest.mark.parametrize("there, back", [("bel", "mass"), ("q", "mass")])
def test_round_trip(tmp_path, algo, there, back):
    mid, end = tmp_path / "mid.json", tmp_path / "end.json"
    src = DATA / "mass_n3.json"
    assert run("transform", "--from", "mass", "--to", there, "--algo", algo, "--in", src, "--out", mid)[0] == 0
    assert run("transform", "--from", there, "--to", back, "--algo", algo, "--in", mid, "--out", end)[0] == 0
    np.testing.assert_allclose(load_setfunction(end).values, load_setfunction(src).values, atol=1e-11)


def test_q_to_pl(tmp_path):
    q, pl = tmp_path / "q.json", tmp_path / "pl.json"
    run("transform", "--from", "mass", "--to", "q", "--in", DATA / "mass_n3.json", "--out", q)
    assert run("transform", "--from", "q", "--to", "pl", "--in", q, "--out", pl)[0] == 0
    values = load_setfunction(pl).values
    assert values[0] == 0 and values[7] == pytest.approx(1.0, abs=1e-12)


def test_transform_count(tmp_path):
    status, text = run("transform", "--from", "mass", "--to", "bel", "--count", "--in", DATA / "mass_n3.json",
                       "--out", tmp_path / "b.json")
    assert status == 0
    assert "additions: 9" in text.splitlines()


def test_combine_fast_matches_naive(tmp_path, pair):
    outs = {}
    for algo in ("fast", "naive"):
        outs[algo] = tmp_path / f"{algo}.json"
        status, text = run("combine", "--in1", pair[0], "--in2", pair[1], "--algo", algo, "--out", outs[algo])
        assert status == 0 and text.startswith("conflict: ")
    a, b = (json.loads(outs[k].read_text())["values"] for k in ("fast", "naive"))
    assert a.keys() == b.keys()
    for k in a:
        assert a[k] == pytest.approx(b[k], abs=1e-10)


def test_combine_to_pl(tmp_path, pair):
    out = tmp_path / "pl.json"
    assert run("combine", "--in1", pair[0], "--in2", pair[1], "--to", "pl", "--out", out)[0] == 0
    expected = combine_to_plausibility(load_setfunction(pair[0]), load_setfunction(pair[1]))
    got = load_setfunction(out)
    assert got.kind is Kind.PLAUSIBILITY
    np.testing.assert_allclose(got.values, expected.values, atol=1e-11)


def test_combine_total_conflict(tmp_path, capsys):
    frame = Frame(["a", "b"])
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    save_setfunction(SetFunction.from_subsets(frame, {"a": 1.0}), p1)
    save_setfunction(SetFunction.from_subsets(frame, {"b": 1.0}), p2)
    status, _ = run("combine", "--in1", p1, "--in2", p2, "--normalize", "--out", tmp_path / "o.json")
    assert status == 7
    assert "error[total-conflict]" in capsys.readouterr().err
    status, text = run("combine", "--in1", p1, "--in2", p2, "--out", tmp_path / "o.json")
    assert status == 0 and "conflict: 1" in text


def test_combine_frame_mismatch(tmp_path):
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    save_setfunction(SetFunction.vacuous(Frame(["a", "b"])), p1)
    save_setfunction(SetFunction.vacuous(Frame(["a", "c"])), p2)
    assert run("combine", "--in1", p1, "--in2", p2, "--out", tmp_path / "o.json")[0] == 6


def test_verify_hasse(tmp_path):
    dump = tmp_path / "h4.json"
    status, text = run("verify", "--hasse", 4, "--exclude-empty", "--dump", dump)
    assert status == 0
    assert text.splitlines() == ["valid", "cost: 28"]
    status, text = run("verify", "--malgorithm", dump)
    assert text.splitlines()[0] == "valid"


def test_verify_counterexample():
    status, text = run("verify", "--malgorithm", DATA / "subset_twice_p1.json")
    assert status == 0
    assert text.splitlines()[0] == "invalid witness=(0,1) paths=2"


def test_mobius_fn_chain(tmp_path):
    out = tmp_path / "mu.json"
    for method in ("recursive", "chains"):
        status, text = run("mobius-fn", "--poset", DATA / "chain3.json", "--method", method, "--out", out)
        assert status == 0
        assert text.splitlines() == ["x x 1", "x y -1", "y y 1", "y z -1", "z z 1"]
    assert json.loads(out.read_text())["weights"] == [[0, 0, 1], [0, 1, -1], [1, 1, 1], [1, 2, -1], [2, 2, 1]]


def test_mobius_fn_rejects_non_order(tmp_path, capsys):
    p = tmp_path / "cyc.json"
    p.write_text(json.dumps({"source": {"size": 2}, "target": {"size": 2}, "arrows": [[0, 1], [1, 0]]}))
    assert run("mobius-fn", "--poset", p)[0] == 8
    assert "error[not-a-partial-order]" in capsys.readouterr().err


def test_bench_csv(tmp_path):
    out = tmp_path / "bench.csv"
    status, _ = run("bench", "--n-min", 5, "--n-max", 10, "--trials", 1, "--out", out)
    assert status == 0
    rows = list(csv.DictReader(out.open()))
    expected = {r["n"]: r for r in cost_table(range(5, 11))}
    assert len(rows) == 6
    for row in rows:
        want = expected[int(row["n"])]
        for col in ("subsets", "cost_obvious", "cost_hasse"):
            assert int(row[col]) == want[col]
        assert float(row["ratio"]) == want["ratio"]


def test_parse_error_has_context(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"frame": ["a"],\n "values": {"a": 1,}}')
    status, _ = run("transform", "--from", "mass", "--to", "bel", "--in", bad, "--out", tmp_path / "o.json")
    assert status == 3
    assert "line 2" in capsys.readouterr().err


def test_missing_file(tmp_path, capsys):
    status, _ = run("transform", "--from", "mass", "--to", "bel", "--in", tmp_path / "nope.json",
                    "--out", tmp_path / "o.json")
    assert status != 0
    assert capsys.readouterr().err.startswith("fastmobius: error[")


def test_capacity_env(tmp_path):
    src = tmp_path / "m.json"
    save_setfunction(SetFunction.vacuous(Frame.of_size(5)), src)
    proc = subprocess.run(
        [sys.executable, "-m", "fastmobius", "transform", "--from", "mass", "--to", "bel", "--in", str(src),
         "--out", str(tmp_path / "o.json")],
        capture_output=True, text=True, env={**os.environ, "FASTMOBIUS_MAX_N": "4"},
    )
    assert proc.returncode == 5
    assert proc.stderr.startswith("fastmobius: error[capacity-exceeded]:")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fastmobius", "verify", "--hasse", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines() == ["valid", "cost: 12"]
