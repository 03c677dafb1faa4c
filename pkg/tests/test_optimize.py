import numpy as np
import pytest

from esvs import metrics, oracle
from esvs.optimize import default_bracket, fidelity_sweep, golden_section_max, optimal_fidelity
from esvs.states import EsvsParams, PssvsParams

OPTIMA = [
    ((2, 2, 1.5, 0.1, 3.0), 1.4758, 0.992613),
    ((2, 4, 1.5, 0.1, 3.0), 1.76518, 0.971793),
    ((2, 2, 2.5, 0.1, 4.0), 2.49645, 0.99987),
]


@pytest.mark.parametrize("args,r_ref,f_ref", OPTIMA)
def test_reference_optima(args, r_ref, f_ref):
    res = optimal_fidelity(*args, tol=1e-6)
    assert res.f_star == pytest.approx(f_ref, abs=5e-6)
    assert res.r_star == pytest.approx(r_ref, abs=5e-5)
    assert not res.boundary and not res.degenerate
    assert res.bracket[1] - res.bracket[0] < 1e-6


@pytest.mark.parametrize("args,r_ref,f_ref", OPTIMA)
def test_optimum_stable_and_oracle_consistent(args, r_ref, f_ref):
    n, m, lam, lo, hi = args
    base = optimal_fidelity(*args, tol=1e-6)
    finer = optimal_fidelity(*args, tol=5e-7, scan_points=257)
    assert finer.r_star == pytest.approx(base.r_star, abs=1e-6)
    assert finer.f_star == pytest.approx(base.f_star, abs=1e-10)
    truth = oracle.oracle_fidelity(EsvsParams(base.r_star, n), PssvsParams(lam, m))
    assert base.f_star == pytest.approx(truth, abs=1e-6)
    for edge in (lo, hi):
        assert base.f_star >= metrics.fidelity(EsvsParams(edge, n), PssvsParams(lam, m))
    assert 0 <= base.f_star <= 1 + 1e-9


def test_degenerate_and_boundary_cases():
    res = optimal_fidelity(1, 2, 1.0)
    assert res.degenerate and res.f_star == 0.0 and res.evals == 0
    res = optimal_fidelity(2, 2, 1.5, 0.1, 1.0)
    assert res.boundary and res.r_star == pytest.approx(1.0)


def test_invalid_brackets():
    with pytest.raises(ValueError):
        optimal_fidelity(2, 2, 1.5, 2.0, 1.0)
    with pytest.raises(ValueError):
        optimal_fidelity(2, 2, 1.5, -0.5, 0.5)
    with pytest.raises(ValueError):
        optimal_fidelity(2, 2, 1.5, tol=0)


def test_default_bracket_mirrors_for_negative_lambda():
    assert default_bracket(1.5) == (0.05, 3.0)
    assert default_bracket(2.5) == (0.05, 4.0)
    assert default_bracket(-1.0) == (-3.0, -0.05)
    res = optimal_fidelity(2, 2, -1.5)
    assert res.r_star == pytest.approx(-1.4758, abs=5e-5)


def test_golden_section_on_parabola():
    x, fx, evals, (a, b) = golden_section_max(lambda t: -(t - 0.3) ** 2, -1.0, 2.0, 1e-8)
    assert x == pytest.approx(0.3, abs=1e-7) and b - a < 1e-8 and evals > 10


def test_sweep_parity_and_shape():
    table = fidelity_sweep(1, 2, [0.5, 1.0, 1.5], np.linspace(0.1, 2, 7))
    assert table.shape == (3, 7) and np.all(table == 0)
    with pytest.raises(ValueError):
        fidelity_sweep(2, 2, [0.0], [1.0])
    with pytest.raises(ValueError):
        fidelity_sweep(2, 2, [1.0], [np.inf])


def test_sweep_single_interior_maximum():
    rs = np.linspace(0.05, 3.0, 400)
    row = fidelity_sweep(2, 2, [1.5], rs)[0]
    slopes = np.sign(np.diff(row))
    assert np.count_nonzero(np.diff(slopes)) == 1
    assert rs[row.argmax()] == pytest.approx(1.4758, abs=0.01)


def test_sweep_ridge_for_four_and_six():
    lams = np.linspace(1.0, 3.0, 5)
    rs = np.linspace(0.05, 4.0, 400)
    table = fidelity_sweep(4, 6, lams, rs)
    ridge = rs[table.argmax(axis=1)]
    assert np.all(np.diff(ridge) > 0)
    assert np.all(table.max(axis=1) > 0.98)
