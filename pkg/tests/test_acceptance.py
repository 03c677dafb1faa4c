"""Acceptance gate: one test group per criterion, each checked at its stated tolerance.

A PASS/FAIL line per criterion is printed in the pytest terminal summary
(see conftest.py) and on stdout when this file is run as a script.
"""

import csv
import io
import json
import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE
from esvs import metrics, oracle, verify
from esvs.cli import main
from esvs.reports import PhasePoint
from esvs.states import EsvsParams

R_GRID = verify.R_GRID
N_GRID = verify.N_GRID


def record(crit, title, part, ok, detail):
    ACCEPTANCE.setdefault(crit, []).append((part, bool(ok), detail, title))
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {crit} ({part}): {detail}")
    assert ok, detail


def cli(capsys, *argv):
    code = main(list(argv))
    out, _ = capsys.readouterr()
    return code, out


# 1 -------------------------------------------------------------------------

OPTIMA = [((2, 2, 1.5), 1.4758, 0.992613), ((2, 4, 1.5), 1.76518, 0.971793), ((2, 2, 2.5), 2.49645, 0.99987)]


@pytest.mark.parametrize("nml,r_ref,f_ref", OPTIMA)
def test_c1_optimal_fidelity(capsys, nml, r_ref, f_ref):
    n, m, lam = nml
    start = time.perf_counter()
    code, out = cli(capsys, "fidelity-opt", "--n", str(n), "--m", str(m), "--lambda", str(lam))
    elapsed = time.perf_counter() - start
    vals = json.loads(out)["values"]
    df, dr = abs(vals["f_star"] - f_ref), abs(vals["r_star"] - r_ref)
    ok = code == 0 and df <= 1e-3 and dr <= 5e-3 and elapsed < 1.0
    record(1, "optimal fidelity regression", f"n={n} m={m} lambda={lam}", ok,
           f"F*={vals['f_star']} r*={vals['r_star']} |dF|={df:.1e} |dr|={dr:.1e} in {elapsed:.2f} s")


# 2 -------------------------------------------------------------------------


def test_c2_oracle_equivalence():
    start = time.perf_counter()
    reports = [verify.run(s) for s in verify.SUITES]
    elapsed = time.perf_counter() - start
    sweeps = [sw for rep in reports for sw in rep.sweeps]
    bad = [sw.line() for sw in sweeps if not sw.passed]
    count = sum(sw.count for sw in sweeps)
    worst = max(sw.worst for sw in sweeps)
    quantities = {sw.quantity for sw in sweeps}
    ok = not bad and elapsed < 60.0 and len(quantities) == 9
    record(2, "oracle-equivalence sweep", "all quantities", ok,
           f"{count} comparisons in {len(sweeps)} sweeps, worst deviation {worst:.1e}, {elapsed:.1f} s"
           + (f"; failing: {bad}" if bad else ""))


# 3 -------------------------------------------------------------------------

TITLE3 = "Wigner function properties"


def test_c3_trace_on_the_stated_box():
    failures, worst = [], 0.0
    for r in (-1.0, -0.5, -0.2, 0.2, 0.5, 1.0):
        for n in range(6):
            tr = metrics.wigner_grid(EsvsParams(r, n), (-6, 6), (-6, 6), 241).trapezoid()
            worst = max(worst, abs(tr - 1))
            if abs(tr - 1) > 1e-3:
                failures.append(f"(n={n},r={r}):{tr:.4f}")
    detail = f"worst |trace-1| = {worst:.2e} over 36 states"
    if failures:
        detail += (f"; {len(failures)} states exceed 1e-3 because their quadrature spread reaches past "
                   f"|q|=6, e.g. {', '.join(failures[:4])}")
    record(3, TITLE3, "trace on [-6,6]^2, 241^2 points", not failures, detail)


def test_c3_center_sign_and_bound():
    sign_bad = []
    for n in range(8):
        for r in (1e-3, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5):
            w = metrics.wigner(EsvsParams(r, n), PhasePoint(0.0, 0.0))
            if np.sign(w) != (1 if n % 2 == 0 else -1):
                sign_bad.append((n, r, w))
    record(3, TITLE3, "center sign (+ even n, - odd n, 0<r<=0.5)", not sign_bad,
           f"56 states checked, {len(sign_bad)} violations")

    peak = 0.0
    for r in R_GRID:
        for n in range(6):
            g = metrics.wigner_grid(EsvsParams(r, n), (-6, 6), (-6, 6), 241)
            peak = max(peak, float(np.abs(g.w).max()))
    ok = peak <= 1 / math.pi + 1e-9
    record(3, TITLE3, "|W| <= 1/pi + 1e-9", ok, f"max |W| - 1/pi = {peak - 1 / math.pi:.1e} over 48 grids")


# 4 -------------------------------------------------------------------------

TITLE4 = "photon statistics"


def test_c4_photon_statistics():
    worst, zero_bad = 0.0, 0
    for r in R_GRID:
        for n in N_GRID:
            p = EsvsParams(r, n)
            probs = [metrics.pnd(p, m) for m in range(oracle.default_dim(r, n) + 1)]
            worst = max(worst, abs(math.fsum(probs) - 1))
            zero_bad += sum(1 for m, pr in enumerate(probs) if (m < n or (m - n) % 2) and pr != 0.0)
    record(4, TITLE4, "normalisation", worst <= 1e-8, f"max |sum P_m - 1| = {worst:.1e}")
    record(4, TITLE4, "exact zeros for m<n and odd m-n", zero_bad == 0, f"{zero_bad} nonzero entries")

    qs = [metrics.mandel_q(EsvsParams(r, 0)) for r in np.linspace(0.1, 1.5, 29)]
    record(4, TITLE4, "Q(n=0) >= 1 on [0.1, 1.5]", min(qs) >= 1.0, f"min Q = {min(qs):.6f}")

    q1 = oracle.oracle_mandel_q(oracle.esvs_vector(EsvsParams(0.01, 1)))
    record(4, TITLE4, "oracle Q(n=1, r=0.01) -> -1", abs(q1 + 1) <= 1e-3, f"Q = {q1:.6f}")


# 5 -------------------------------------------------------------------------

TITLE5 = "non-Gaussianity"


def test_c5_non_gaussianity(capsys, tmp_path):
    d0 = [metrics.non_gaussianity(EsvsParams(r, 0)).delta for r in np.linspace(-2, 2, 41)]
    record(5, TITLE5, "delta(n=0) = 0 on [-2, 2]", max(map(abs, d0)) <= 1e-9, f"max |delta| = {max(map(abs, d0)):.1e}")

    d1 = oracle.oracle_nongauss(oracle.esvs_vector(EsvsParams(1e-7, 1))).delta
    record(5, TITLE5, "oracle delta(n=1, r->0) = 5/12", abs(d1 - 5 / 12) <= 1e-6, f"delta = {d1:.9f}")

    ds = [metrics.non_gaussianity(EsvsParams(0.5, n)).delta for n in (0, 2, 4, 6)]
    ok = all(b > a for a, b in zip(ds, ds[1:]))
    record(5, TITLE5, "delta increases over n = 0, 2, 4, 6 at r = 0.5", ok, ", ".join(f"{d:.6f}" for d in ds))

    out = tmp_path / "nongauss.csv"
    code = main(["nongauss", "--n", "1", "2", "3", "4", "--r-from", "-2", "--r-to", "2", "--r-steps", "41",
                 "--out", str(out)])
    rows = list(csv.reader(io.StringIO(out.read_text())))
    ok = code == 0 and len(rows) == 1 + 4 * 41 and rows[0][2] == "delta"
    record(5, TITLE5, "sweep CSV", ok, f"{len(rows) - 1} rows written")


# 6 -------------------------------------------------------------------------

TITLE6 = "quadratures"


def test_c6_quadratures(tmp_path):
    var_err = snr_err = 0.0
    for r in np.linspace(-1.5, 1.5, 31):
        if r == 0:
            continue
        q = metrics.quadrature(EsvsParams(float(r), 0))
        var_err = max(var_err, abs(q.var_y - math.exp(-2 * r) / 2))
        snr_err = max(snr_err, abs(q.snr_xy))
    record(6, TITLE6, "n=0 var_y = exp(-2r)/2", var_err <= 1e-10, f"max error {var_err:.1e}")
    record(6, TITLE6, "n=0 snr_xy = 0", snr_err <= 1e-10, f"max |snr_xy| {snr_err:.1e}")

    low = min(metrics.quadrature(EsvsParams(r, n)).product for r in R_GRID for n in range(11))
    record(6, TITLE6, "Heisenberg product >= 1/2", low >= 0.5 - 1e-9, f"min product {low:.12f}")

    out = tmp_path / "quadrature.csv"
    code = main(["quadrature", "--n", "2", "6", "--r-from", "0.05", "--r-to", "1.5", "--r-steps", "30",
                 "--out", str(out)])
    rows = list(csv.reader(io.StringIO(out.read_text())))
    ok = code == 0 and len(rows) == 61 and {r[0] for r in rows[1:]} == {"2", "6"}
    record(6, TITLE6, "sweep CSV for n = 2, 6", ok, f"{len(rows) - 1} rows written")


# 7 -------------------------------------------------------------------------


def test_c7_verify_suite(capsys):
    start = time.perf_counter()
    code, out = cli(capsys, "verify", "--suite", "all")
    elapsed = time.perf_counter() - start
    topics = ["wigner-combinatorial-factor", "wigner-1/pi", "squeezed-vacuum-sign", "fidelity-sinh-argument"]
    adjudicated = all(f"[PASS] adjudication/{t}: oracle supports" in out for t in topics)
    ok = code == 0 and adjudicated and elapsed < 120.0
    record(7, "verification suite", "verify --suite all", ok,
           f"exit {code}, {len(topics)} discrepancies adjudicated, {elapsed:.1f} s")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
