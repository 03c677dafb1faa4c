"""Brute-force truncated Fock-space numerics.

Everything here is built from ladder-operator matrices and matrix
exponentials (dense, or applied to a vector through the sparse generator),
independently of the closed forms in :mod:`esvs.metrics`. The
oracle is the ground truth the closed forms are checked against, and the
fallback for squeezing below :data:`esvs.states.R_MIN`.
"""

from __future__ import annotations

import functools
import math
import os

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .errors import InsufficientDimensionError, ZeroMeanPhotonNumberError
from .fock import FockOperator, FockVector, annihilation, apply_annihilation, apply_creation
from .reports import NonGaussReport, PhasePoint, QuadratureReport
from .states import EsvsParams, GaussianRefParams, PssvsParams

DIM_ENV = "ESVS_FOCK_DIM"
TAIL_TOL = 1e-12
LEAK_TOL = 1e-8


def min_squeeze_dim(r: float) -> int:
    return max(16, math.ceil(10.0 * math.exp(2.0 * abs(r))))


def default_dim(r: float, n: int = 0) -> int:
    """Fock cutoff for a state squeezed by ``r`` carrying ``n`` extra photons.

    ``max(64, 4n + ceil(10 e^{2|r|}))``, raised further so that the squeezed
    vacuum tail tanh^{2k}|r| drops below 1e-18 inside the basis. The
    ``ESVS_FOCK_DIM`` environment variable overrides the heuristic.
    """
    env = os.environ.get(DIM_ENV)
    if env:
        return int(env)
    dim = max(64, 4 * n + min_squeeze_dim(r))
    t = math.tanh(abs(r))
    if t > 0:
        pairs = math.ceil(math.log(1e-18) / (2.0 * math.log(t)))
        dim = max(dim, 2 * pairs + 2 * n + 16)
    return dim


def _squeeze_generator(r: float, dim: int) -> np.ndarray:
    a = annihilation(dim)
    a2 = a @ a
    return 0.5 * r * (a2.T - a2)


@functools.lru_cache(maxsize=64)
def squeeze_matrix(r: float, dim: int) -> FockOperator:
    """Dense S(r) = expm[(r/2)(A^dagger^2 - A^2)] on ``dim`` levels.

    scipy's Pade scaling-and-squaring ``expm`` does the exponential. The
    result is cached; the returned matrix is read-only.

    Raises:
        InsufficientDimensionError: if ``dim < max(16, 10 e^{2|r|})`` or the
            lower half block is not unitary to 1e-9.
    """
    r = float(r)
    if dim < min_squeeze_dim(r):
        raise InsufficientDimensionError(
            f"dim={dim} below the minimum {min_squeeze_dim(r)} for squeezing r={r}"
        )
    s = scipy.linalg.expm(_squeeze_generator(r, dim))
    half = dim // 2
    defect = s.T @ s - np.eye(dim)
    if np.max(np.abs(defect[:half, :half])) > 1e-9:
        raise InsufficientDimensionError(f"S({r}) not unitary on the converged block at dim={dim}")
    return FockOperator(s, meta={"r": r})


def _check_tail(amps: np.ndarray, start: int, what: str) -> None:
    total = float(np.vdot(amps, amps).real)
    tail = float(np.vdot(amps[start:], amps[start:]).real)
    if tail > TAIL_TOL * total:
        raise InsufficientDimensionError(
            f"{what}: {tail / total:.2e} of the norm sits in the top {amps.shape[0] - start} levels"
        )


@functools.lru_cache(maxsize=256)
def _squeezed_vacuum_action(r: float, dim: int) -> np.ndarray:
    """S(r)|0> as the action of expm on |0>, with the sparse generator.

    Same exponential as column 0 of :func:`squeeze_matrix` but without
    forming the dense matrix, which matters once dim reaches the thousands.
    """
    r = float(r)
    if dim < min_squeeze_dim(r):
        raise InsufficientDimensionError(
            f"dim={dim} below the minimum {min_squeeze_dim(r)} for squeezing r={r}"
        )
    a = scipy.sparse.diags(np.sqrt(np.arange(1, dim, dtype=float)), 1, format="csr")
    a2 = a @ a
    e0 = np.zeros(dim)
    e0[0] = 1.0
    v = scipy.sparse.linalg.expm_multiply((0.5 * r * (a2.T - a2)).tocsr(), e0)
    v.setflags(write=False)
    return v


def squeezed_vacuum_vector(r: float, dim: int | None = None) -> FockVector:
    """S(r)|0> on ``dim`` levels."""
    dim = dim or default_dim(r)
    return FockVector(_squeezed_vacuum_action(r, dim))


def esvs_vector(p: EsvsParams, dim: int | None = None) -> FockVector:
    """Normalised a^dagger^n S(r)|0>; ``norm_sq`` is the oracle estimate of C_n."""
    dim = dim or default_dim(p.r, p.n)
    v0 = _squeezed_vacuum_action(p.r, dim)
    _check_tail(v0, dim - 2 * p.n - 2, f"squeezed vacuum r={p.r}")
    w = apply_creation(v0, p.n)
    nsq = float(np.vdot(w, w).real)
    return FockVector(w[:dim] / math.sqrt(nsq), norm_sq=nsq)


def pssvs_vector(s: PssvsParams, dim: int | None = None) -> FockVector:
    """Normalised a^m S(lam)|0>; ``norm_sq`` is the oracle estimate of C_m."""
    dim = dim or default_dim(s.lam, s.m)
    v0 = _squeezed_vacuum_action(s.lam, dim)
    _check_tail(v0, dim - 2 * s.m - 2, f"squeezed vacuum lambda={s.lam}")
    w = apply_annihilation(v0, s.m)
    nsq = float(np.vdot(w, w).real)
    out = np.zeros(dim, dtype=complex)
    out[: w.shape[0]] = w / math.sqrt(nsq)
    return FockVector(out, norm_sq=nsq)


def _displacement_generator(alpha: complex, dim: int):
    a = scipy.sparse.diags(np.sqrt(np.arange(1, dim, dtype=float)), 1, format="csr")
    return (alpha * a.T - np.conj(alpha) * a).tocsr()


def displace(amps: np.ndarray, alpha: complex, work_dim: int) -> np.ndarray:
    """D(alpha)|v> computed in ``work_dim`` levels via the action of expm."""
    v = np.zeros(work_dim, dtype=complex)
    v[: amps.shape[0]] = amps
    if alpha == 0:
        return v
    return scipy.sparse.linalg.expm_multiply(_displacement_generator(alpha, work_dim), v)


def oracle_wigner(v: FockVector, pt: PhasePoint) -> float:
    """W(q, p) = (1/pi) sum_k (-1)^k |<k|D(-alpha)|v>|^2, normalised to 1 over dq dp.

    The displacement runs in a space twice the size of ``v``.

    Raises:
        InsufficientDimensionError: if the displaced ket puts more than 1e-8
            of its norm in the top quarter of the working basis.
    """
    work = 2 * v.dim
    w = displace(v.amps, -pt.alpha, work)
    prob = np.abs(w) ** 2
    total = prob.sum()
    if prob[3 * work // 4 :].sum() > LEAK_TOL * total:
        raise InsufficientDimensionError(
            f"displaced state leaks into the top quarter at alpha={pt.alpha:.3g}, dim={v.dim}"
        )
    parity = np.where(np.arange(work) % 2 == 0, 1.0, -1.0)
    return float(parity @ prob) / math.pi


def oracle_moment(v: FockVector, k: int, l: int) -> complex:
    """<v| a^k a^dagger^l |v>, exact on the truncated ket."""
    left = apply_creation(v.amps, k)
    right = apply_creation(v.amps, l)
    size = max(left.shape[0], right.shape[0])
    left = np.pad(left, (0, size - left.shape[0]))
    right = np.pad(right, (0, size - right.shape[0]))
    return complex(np.vdot(left, right))


def oracle_pnd(v: FockVector, m: int) -> float:
    if m < 0:
        raise ValueError("photon number must be non-negative")
    if m >= v.dim:
        return 0.0
    return float(abs(v.amps[m]) ** 2)


def oracle_mean_photons(v: FockVector) -> float:
    return float(np.arange(v.dim) @ v.probabilities())


def oracle_mandel_q(v: FockVector) -> float:
    """Q = <a^dagger^2 a^2>/<a^dagger a> - <a^dagger a> from the number distribution."""
    k = np.arange(v.dim, dtype=float)
    prob = v.probabilities()
    mean = float(k @ prob)
    if mean <= 1e-12:
        raise ZeroMeanPhotonNumberError("Mandel Q undefined at zero mean photon number")
    fact2 = float((k * (k - 1.0)) @ prob)
    return fact2 / mean - mean


def oracle_quadrature(v: FockVector) -> QuadratureReport:
    m_val = oracle_moment(v, 2, 0).real
    n_val = oracle_mean_photons(v)
    return QuadratureReport.from_moments(m_val, n_val)


def oracle_gaussian_ref(v: FockVector) -> GaussianRefParams:
    """Moment-matched squeezed thermal parameters from oracle moments."""
    return GaussianRefParams.from_moments(oracle_moment(v, 2, 0).real, oracle_mean_photons(v))


def thermal_weights(nbar: float, dim: int) -> np.ndarray:
    if nbar == 0:
        w = np.zeros(dim)
        w[0] = 1.0
        return w
    q = nbar / (1.0 + nbar)
    return q ** np.arange(dim) / (1.0 + nbar)


def thermal_dim(gp: GaussianRefParams, at_least: int = 0) -> int:
    """Smallest cutoff meeting both the thermal tail and the squeezing bound."""
    dim = max(at_least, min_squeeze_dim(gp.varsigma))
    if gp.nbar > 0:
        q = gp.nbar / (1.0 + gp.nbar)
        dim = max(dim, math.ceil(math.log(TAIL_TOL) / math.log(q)) + 1)
    return dim


def squeezed_thermal(gp: GaussianRefParams, dim: int) -> FockOperator:
    """tau = S(s) nu(nbar) S(s)^-1 as a dense matrix.

    Raises:
        InsufficientDimensionError: if (nbar/(1+nbar))^dim >= 1e-12.
    """
    if gp.nbar > 0 and (gp.nbar / (1.0 + gp.nbar)) ** dim >= TAIL_TOL:
        raise InsufficientDimensionError(f"thermal tail too heavy for dim={dim} at nbar={gp.nbar}")
    s = squeeze_matrix(gp.varsigma, dim).entries
    tau = (s * thermal_weights(gp.nbar, dim)) @ s.T
    return FockOperator(tau, meta={"varsigma": gp.varsigma, "nbar": gp.nbar})


def hs_quantities(v: FockVector, tau: FockOperator) -> tuple[float, float, float]:
    """Return ``(mu_tau, kappa, delta)`` for pure ``v`` against Gaussian ``tau``."""
    amps = np.zeros(tau.dim, dtype=complex)
    amps[: min(v.dim, tau.dim)] = v.amps[: tau.dim]
    t = tau.entries
    mu_tau = float(np.sum(np.abs(t) ** 2))
    kappa = float(np.vdot(amps, t @ amps).real)
    delta = 0.5 + 0.5 * mu_tau - kappa
    return mu_tau, kappa, delta


def oracle_nongauss(v: FockVector) -> NonGaussReport:
    """Non-Gaussianity from oracle moments, a dense reference state and traces."""
    gp = oracle_gaussian_ref(v)
    tau = squeezed_thermal(gp, thermal_dim(gp, v.dim))
    mu_tau, kappa, delta = hs_quantities(v, tau)
    return NonGaussReport(
        delta=delta, ref=gp, kappa=kappa, mu_tau=mu_tau, terms_used=tau.dim, tail_bound=TAIL_TOL
    )


def oracle_lambda(r: float, varsigma: float, m: int, n: int, dim: int | None = None) -> complex:
    """<0| S^-1(r) a^n S(varsigma) |m> by explicit matrix products."""
    dim = dim or max(default_dim(r, n), default_dim(varsigma, m))
    bra = squeeze_matrix(r, dim).entries[:, 0]
    ket = squeeze_matrix(varsigma, dim).entries[:, m]
    ket_lowered = apply_annihilation(ket, n)
    return complex(np.dot(bra[: ket_lowered.shape[0]].conj(), ket_lowered))


def oracle_fidelity(e: EsvsParams, s: PssvsParams, dim: int | None = None) -> float:
    """|<pssvs|esvs>|^2 for the two normalised kets."""
    dim = dim or max(default_dim(e.r, e.n), default_dim(s.lam, s.m))
    u = esvs_vector(e, dim)
    w = pssvs_vector(s, dim)
    return float(abs(np.vdot(w.amps, u.amps)) ** 2)


def check_doubling(compute, dim: int, rtol: float = 1e-8, atol: float = 1e-12):
    """Evaluate ``compute(dim)`` and ``compute(2 * dim)``; insist they agree.

    Returns the value at ``dim``.

    Raises:
        InsufficientDimensionError: if the two values differ by more than
            ``atol + rtol * |value|``.
    """
    lo = compute(dim)
    hi = compute(2 * dim)
    lo_arr, hi_arr = np.asarray(lo), np.asarray(hi)
    if not np.all(np.abs(lo_arr - hi_arr) <= atol + rtol * np.abs(hi_arr)):
        raise InsufficientDimensionError(
            f"result changes under dimension doubling {dim} -> {2 * dim}: {lo} vs {hi}"
        )
    return lo
