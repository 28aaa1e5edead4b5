import csv
import io
import json

import pytest

from cascade import cli
from cascade.engine import dep_fidelity_levels
from cascade.experiments import (
    default_levels,
    ensemble,
    fold,
    rows_to_csv,
    run_sample,
    table1,
    table2,
    threshold_report,
    curve,
)


def parse_csv(text):
    return list(csv.reader(io.StringIO(text)))


def test_csv_floats_round_trip():
    x = 0.1 + 0.2
    text = rows_to_csv(("l", "v"), [(0, x), (1, 1e-300)])
    rows = parse_csv(text)
    assert rows[0] == ["l", "v"]
    assert float(rows[1][1]) == x and rows[1][0] == "0"


def test_table_headers_and_shape():
    t1 = table1()
    assert t1.header == ("l", "F_dep", "F_ad", "F_bf")
    assert len(t1.rows) == 6 and t1.terminal["dep"] == 5
    assert t1.rows[3][1:] == pytest.approx((0.993991, 0.99403, 0.993576), abs=1e-6)
    t2 = table2()
    assert t2.header == ("l", "D_ad", "D_bf")
    assert t2.rows[2][1:] == pytest.approx((8.77e-5, 2.04e-3), rel=0.02)
    assert parse_csv(t2.to_csv())[0] == ["l", "D_ad", "D_bf"]
    assert json.loads(t2.to_json())["header"] == ["l", "D_ad", "D_bf"]


@pytest.mark.parametrize("which", ["eq-dep-F", "eq-dep-p", "ad-five"])
def test_curves_agree(which):
    t = curve(which, n=9)
    assert t.header == ("param", "closed_form", "numeric", "abs_diff")
    assert max(t.column("abs_diff")) < 1e-9


def test_curve_examples():
    assert curve("ad-five", 0.0, 0.0, 1).rows[0] == (0.0, 1.0, 1.0, 0.0)
    assert curve("eq-dep-F", 0.92, 0.92, 1).rows[0][1] == pytest.approx(0.946665, abs=1e-6)
    with pytest.raises(ValueError, match="outside the domain"):
        curve("ad-steane", -0.1, 0.5)
    with pytest.raises(ValueError):
        curve("nope")


def test_threshold_report():
    r = threshold_report()
    assert 0.18 < r["p_threshold"] < 0.19
    assert 0.857 < r["F0_threshold"] < 0.865
    assert r["gain_at_p_0.18"] == pytest.approx(0.001733, abs=1e-6)
    assert r["gain_at_p_0.19"] == pytest.approx(-0.003311, abs=1e-6)


def test_default_levels():
    assert default_levels(0.9) == 6
    assert default_levels(0.92) == 5
    with pytest.raises(ValueError):
        default_levels(0.5)


def test_ensemble_independent_of_workers():
    serial = ensemble(0.9, 6, seed=11, levels=3, workers=1, keep_samples=True)
    parallel = ensemble(0.9, 6, seed=11, levels=3, workers=3, keep_samples=True)
    assert serial.to_json() == parallel.to_json()
    assert serial.samples_csv() == parallel.samples_csv()


def test_ensemble_fold_matches_serial_reference():
    s = ensemble(0.92, 5, seed=3, levels=2, keep_samples=True)
    records = [run_sample(0.92, 3, i, 2) for i in range(5)]
    assert records == s.samples
    D_max, F_min = fold(records, 2)
    for l in range(3):
        assert D_max[l] == max(r["D"][l] for r in records) == s.D_max[l]
        assert F_min[l] == min(r["F"][l] for r in records) == s.F_min[l]


def test_ensemble_small_properties():
    s = ensemble(0.9, 10, seed=5)
    assert s.levels == 6 and len(s.D_max) == len(s.F_min) == 7
    dep = dep_fidelity_levels(0.9, 6)
    assert all(f <= d + 1e-9 for f, d in zip(s.F_min, dep))
    assert s.F_min[6] >= 0.99999
    assert parse_csv(s.to_csv())[0] == ["l", "D_max", "F_min"]


def test_ensemble_validation():
    with pytest.raises(ValueError):
        ensemble(0.9, 0, seed=1)
    with pytest.raises(ValueError):
        ensemble(1.0, 3, seed=1)
    with pytest.raises(ValueError):
        ensemble(0.9, 3, seed=1).samples_csv()


# -- command line ---------------------------------------------------------


def run_cli(tmp_path, *argv):
    out = tmp_path / "out.txt"
    code = cli.main([*argv, "--out", str(out)])
    return code, (out.read_text() if out.exists() else None)


def test_cli_run_depolarizing(tmp_path):
    code, text = run_cli(tmp_path, "run", "--code", "five", "--noise", "dep", "--fidelity", "0.92")
    assert code == 0
    data = json.loads(text)
    assert data["terminal_L"] == 5 and data["code"] == "five"
    assert data["noise"] == {"kind": "dep", "F0": 0.92}


def test_cli_run_ad_and_trivial(tmp_path):
    code, text = run_cli(tmp_path, "run", "--noise", "ad", "--fidelity", "0.92")
    assert code == 0
    assert json.loads(text)["levels"][1]["F"] == pytest.approx(0.946762, abs=1e-6)
    code, text = run_cli(tmp_path, "run", "--noise", "dep", "--fidelity", "1.0")
    assert json.loads(text)["terminal_L"] == 0


def test_cli_run_other_noises(tmp_path):
    code, text = run_cli(tmp_path, "run", "--noise", "pauli", "--params", "0.01", "0.02", "0.03", "--levels", "2")
    assert code == 0 and len(json.loads(text)["levels"]) == 3
    code, text = run_cli(tmp_path, "run", "--noise", "general", "--params", "0.1", "0.2", "0.3", "1.2", "0.2")
    assert code == 0
    code, text = run_cli(tmp_path, "run", "--noise", "general", "--fidelity", "0.9", "--seed", "42", "--levels", "1")
    assert json.loads(text)["noise"]["F0"] == pytest.approx(0.9, abs=1e-10)
    code, text = run_cli(tmp_path, "run", "--code", "steane", "--noise", "ad", "--gamma", "0.05", "--levels", "1")
    assert code == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["run", "--noise", "dep"],
        ["run", "--noise", "dep", "--fidelity", "1.5"],
        ["run", "--noise", "general", "--params", "1", "2"],
        ["run", "--noise", "pauli", "--params", "0.6", "0.6", "0.1"],
        ["run", "--noise", "flip", "--fidelity", "0.9"],
        ["run", "--levels", "13", "--fidelity", "0.9"],
        ["tables", "4"],
        ["curves", "ad-five", "--grid", "0", "2", "5"],
        ["ensemble", "--samples", "3"],
        ["ensemble", "--fidelity", "0.9", "--samples", "0"],
        ["bogus"],
    ],
)
def test_cli_usage_errors(argv, capsys):
    assert cli.main(argv) == 2


def test_cli_engine_failure(monkeypatch, capsys):
    from cascade.channels import ChannelError

    def broken(*a, **k):
        raise ChannelError("invalid Choi matrix: positivity=1.0e-03")

    monkeypatch.setattr(cli, "concatenate", broken)
    assert cli.main(["run", "--fidelity", "0.9"]) == 1
    assert "positivity" in capsys.readouterr().err


def test_cli_tables_and_threshold(tmp_path):
    code, text = run_cli(tmp_path, "tables", "1")
    assert code == 0 and parse_csv(text)[0] == ["l", "F_dep", "F_ad", "F_bf"]
    _, first = run_cli(tmp_path, "threshold")
    _, second = run_cli(tmp_path, "threshold")
    assert first == second
    rows = dict(parse_csv(first)[1:])
    assert 0.18 < float(rows["p_threshold"]) < 0.19
    code, text = run_cli(tmp_path, "threshold", "--format", "json")
    assert json.loads(text)["p_threshold"] == float(rows["p_threshold"])


def test_cli_curves(tmp_path):
    code, text = run_cli(tmp_path, "curves", "eq-dep-p", "--grid", "0", "0.3", "4")
    rows = parse_csv(text)
    assert code == 0 and rows[0] == ["param", "closed_form", "numeric", "abs_diff"] and len(rows) == 5


def test_cli_ensemble_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    sa, sb = tmp_path / "a.csv", tmp_path / "b.csv"
    base = ["ensemble", "--fidelity", "0.9", "--samples", "4", "--seed", "9", "--levels", "2", "--format", "json"]
    assert cli.main([*base, "--workers", "1", "--out", str(a), "--samples-out", str(sa)]) == 0
    assert cli.main([*base, "--workers", "2", "--out", str(b), "--samples-out", str(sb)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert sa.read_bytes() == sb.read_bytes()
    data = json.loads(a.read_text())
    assert data["M"] == 4 and data["seed"] == 9 and len(data["D_max"]) == 3
    assert parse_csv(sa.read_text())[0][:7] == ["index", "theta", "phi", "alpha", "beta", "gamma", "model_F"]
