import math

import numpy as np
import pytest

from esvs import oracle
from esvs.errors import (
    ConventionViolationError,
    InsufficientDimensionError,
    InternalInconsistencyError,
    MagnitudeOverflowError,
)
from esvs.states import (
    EsvsParams,
    GaussianRefParams,
    PssvsParams,
    esvs_norm,
    log_esvs_norm,
    norm_ratio,
    pssvs_norm,
    real_part,
    squeezed_vacuum_coeffs,
)


def test_params_validation():
    with pytest.raises(TypeError):
        EsvsParams(0.5, True)
    with pytest.raises(TypeError):
        EsvsParams(0.5, 1.0)
    with pytest.raises(ValueError):
        EsvsParams(0.5, -1)
    with pytest.raises(ValueError):
        EsvsParams(float("nan"), 1)
    assert EsvsParams(0.0, 2).closed_form_ok is False
    assert EsvsParams(0.3, 2).shifted(1) == EsvsParams(0.3, 3)


def test_pssvs_floor_only_when_subtracting():
    PssvsParams(0.0, 0)
    with pytest.raises(ValueError):
        PssvsParams(1e-8, 1)


def test_gaussian_ref_clamps_and_purity():
    gp = GaussianRefParams(0.2, -1e-14)
    assert gp.nbar == 0.0 and gp.purity == 1.0
    with pytest.raises(ValueError):
        GaussianRefParams(0.2, -0.1)
    assert GaussianRefParams(0.0, 1.0).purity == pytest.approx(1 / 3)


def test_from_moments_rejects_uncertainty_violation():
    with pytest.raises(InternalInconsistencyError):
        GaussianRefParams.from_moments(1.0, 0.2)


def test_from_moments_squeezed_vacuum():
    r = 0.7
    gp = GaussianRefParams.from_moments(math.sinh(r) * math.cosh(r), math.sinh(r) ** 2)
    assert gp.varsigma == pytest.approx(r, rel=1e-12)
    assert gp.nbar == 0.0


@pytest.mark.parametrize("r", [-1.0, 0.3, 1.2])
def test_low_order_norms(r):
    c = math.cosh(r)
    assert esvs_norm(EsvsParams(r, 0)) == pytest.approx(1.0)
    assert esvs_norm(EsvsParams(r, 1)) == pytest.approx(c**2)
    assert esvs_norm(EsvsParams(r, 2)) == pytest.approx(c**2 * (3 * c**2 - 1))
    assert pssvs_norm(PssvsParams(r, 1)) == pytest.approx(math.sinh(r) ** 2)


@pytest.mark.parametrize("r", [-1.5, -0.5, 0.2, 1.0])
@pytest.mark.parametrize("n", [0, 3, 5])
def test_norms_match_oracle(r, n):
    assert esvs_norm(EsvsParams(r, n)) == pytest.approx(oracle.esvs_vector(EsvsParams(r, n)).norm_sq, rel=1e-9)
    s = PssvsParams(r, n)
    assert pssvs_norm(s) == pytest.approx(oracle.pssvs_vector(s).norm_sq, rel=1e-9)


def test_norm_ratio_and_overflow():
    p = EsvsParams(0.8, 4)
    assert norm_ratio(p, 1) == pytest.approx(esvs_norm(p.shifted(1)) / esvs_norm(p))
    big = EsvsParams(3.0, 150)
    assert math.isfinite(log_esvs_norm(big))
    with pytest.raises(MagnitudeOverflowError):
        esvs_norm(big)


def test_real_part_guard():
    assert real_part(2.0 + 1e-14j) == 2.0
    with pytest.raises(ConventionViolationError):
        real_part(1.0 + 1e-3j)


def test_squeezed_vacuum_coeffs():
    v = squeezed_vacuum_coeffs(0.5, 64)
    assert v.amps[0].real == pytest.approx(1 / math.sqrt(math.cosh(0.5)), rel=1e-12)
    assert v.amps[2].real > 0
    assert np.all(v.amps[1::2] == 0)
    assert np.sum(v.probabilities()) == pytest.approx(1.0, abs=1e-10)
    col = oracle.squeeze_matrix(0.5, 256).entries[:64, 0]
    np.testing.assert_allclose(v.amps.real, col, atol=1e-12)
    with pytest.raises(InsufficientDimensionError):
        squeezed_vacuum_coeffs(1.5, 20)
