import csv
import io
import json
import subprocess
import sys

import pytest

from esvs import oracle
from esvs.cli import MetricReport, fmt, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_fidelity_opt_json(capsys):
    code, out, _ = run(capsys, "fidelity-opt", "--n", "2", "--m", "2", "--lambda", "1.5")
    assert code == 0
    rep = MetricReport.from_json(out)
    assert rep.values["f_star"] == pytest.approx(0.992613, abs=1e-6)
    assert rep.method == "closed_form" and rep.params["lambda"] == 1.5
    assert rep.to_json() == out


def test_wigner_csv_contract_and_methods_agree(capsys):
    base = ["wigner", "--n", "0", "--r", "0.6", "--qmin", "-1", "--qmax", "1", "--pmin", "-1", "--pmax", "1",
            "--steps", "5"]
    code, closed, _ = run(capsys, *base)
    assert code == 0
    code, orc, _ = run(capsys, *base, "--method", "oracle", "--threads", "3")
    assert code == 0
    a, b = rows(closed), rows(orc)
    assert a[0] == ["q", "p", "w"] == b[0]
    assert len(a) == 26
    assert [r[:2] for r in a[1:6]] == [["-1", p] for p in ("-1", "-0.5", "0", "0.5", "1")]
    for x, y in zip(a[1:], b[1:]):
        assert float(x[2]) == pytest.approx(float(y[2]), rel=1e-7, abs=1e-9)


def test_outputs_are_byte_identical(capsys, tmp_path):
    args = ["quadrature", "--n", "2", "6", "--r-from", "0.1", "--r-to", "1.5", "--r-steps", "8"]
    _, first, _ = run(capsys, *args, "--threads", "1")
    _, second, _ = run(capsys, *args, "--threads", "4")
    assert first == second
    out = tmp_path / "q.csv"
    assert main(args + ["--out", str(out)]) == 0
    assert out.read_text() == first
    header = rows(first)[0]
    assert header[:4] == ["n", "r", "var_x", "var_y"]


def test_pnd_row_for_forbidden_photon_number(capsys):
    code, out, _ = run(capsys, "pnd", "--n", "1", "--r", "0.5", "--mmax", "0")
    assert code == 0 and rows(out) == [["m", "p"], ["0", "0"]]


def test_scalar_reports(capsys):
    code, out, _ = run(capsys, "mandel-q", "--n", "0", "--r", "0.5")
    assert code == 0 and json.loads(out)["values"]["q"] == pytest.approx(1.54308063)
    code, out, _ = run(capsys, "fidelity", "--n", "1", "--m", "2", "--lambda", "1", "--r", "1")
    assert code == 0 and json.loads(out)["values"]["f"] == 0
    code, out, _ = run(capsys, "nongauss", "--n", "0", "2", "--r", "0.5", "--format", "json")
    data = json.loads(out)
    assert data["values"]["columns"][:3] == ["n", "r", "delta"]
    assert data["meta"]["tolerance"] == 1e-12


def test_fidelity_sweep_grid_spec(capsys):
    code, out, _ = run(capsys, "fidelity-sweep", "--n", "2", "--m", "2", "--lambda-grid", "1:2:3", "--r-grid", "0.5,1.5")
    table = rows(out)
    assert code == 0 and table[0] == ["lambda", "r", "f"] and len(table) == 7
    assert [r[:2] for r in table[1:3]] == [["1", "0.5"], ["1", "1.5"]]


def test_usage_errors_exit_one(capsys):
    assert run(capsys, "pnd", "--n", "1")[0] == 1
    assert run(capsys, "bogus")[0] == 1
    assert run(capsys, "mandel-q", "--n", "1")[0] == 1
    assert run(capsys, "mandel-q", "--n", "1", "--r", "0.5", "--r-from", "0")[0] == 1
    assert run(capsys, "fidelity-opt", "--n", "2", "--m", "2", "--lambda", "1.5", "--r-lo", "2", "--r-hi", "1")[0] == 1
    assert run(capsys, "fidelity-sweep", "--n", "2", "--m", "2", "--lambda-grid", "x", "--r-grid", "1")[0] == 1
    assert run(capsys, "mandel-q", "--n", "0", "--r", "0")[0] == 1
    code, out, err = run(capsys, "pnd", "--n", "-1", "--r", "0.5", "--mmax", "3")
    assert code == 1 and out == "" and err


def test_non_convergence_exits_two(capsys):
    code, _, err = run(capsys, "nongauss", "--n", "3", "--r", "1", "--tol", "1e-300", "--max-terms", "16")
    assert code == 2 and "non-convergence" in err


def test_fock_dim_environment(capsys, monkeypatch):
    monkeypatch.setenv(oracle.DIM_ENV, "20")
    code, _, err = run(capsys, "pnd", "--n", "1", "--r", "1.5", "--mmax", "3", "--method", "oracle")
    assert code == 2 and "InsufficientDimension" in err


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "pnd")
    assert code == 0 and "squeezed-vacuum-sign" in out
    code, _, _ = run(capsys, "verify", "--suite", "pnd", "--fock-dim", "30")
    assert code == 3
    code, _, _ = run(capsys, "verify", "--suite", "moments", "--tol", "1e-16")
    assert code == 3


def test_fmt_and_report_round_trip():
    assert fmt(1 / 3) == "0.333333333"
    assert fmt(True) == "true" and fmt(7) == "7" and fmt(0.0) == "0"
    rep = MetricReport("x", {"a": 1 / 3}, "oracle", {"v": [1 / 7, 2]}, {"fock_dim": 64})
    assert MetricReport.from_json(rep.to_json()) == rep
    assert rep.meta["warnings"] == []


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "esvs", "fidelity", "--n", "0", "--m", "0", "--lambda", "0.6", "--r", "0.6"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["values"]["f"] == pytest.approx(1.0)
