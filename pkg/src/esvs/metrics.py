"""Closed-form metrics of the photon-added squeezed vacuum state.

Every public function takes an :class:`~esvs.states.EsvsParams` (plus
whatever else it needs) and evaluates an analytic expression. Where an
expression contains coth r or 1/tanh r and ``|r| < R_MIN``, the call is
answered by the Fock-space oracle instead.
"""

from __future__ import annotations

import math

import numpy as np

from . import oracle
from .errors import InternalInconsistencyError, NonConvergenceError, ZeroMeanPhotonNumberError
from .reports import NonGaussReport, PhaseGrid, PhasePoint, QuadratureReport
from .specfun import hermite, log_factorial, log_hermite_zero
from .states import (
    R_MIN,
    EsvsParams,
    GaussianRefParams,
    PssvsParams,
    log_esvs_norm,
    log_pssvs_norm,
    norm_ratio,
)

__all__ = [
    "PhasePoint",
    "PhaseGrid",
    "QuadratureReport",
    "NonGaussReport",
    "wigner",
    "wigner_values",
    "wigner_grid",
    "pnd",
    "moment",
    "mean_photons",
    "mandel_q",
    "quadrature",
    "gaussian_ref",
    "lambda_overlap",
    "non_gaussianity",
    "fidelity",
]

FIDELITY_CAP = 1.0 + 1e-9


def _signed_logsum(logs, phases) -> tuple[float, complex]:
    """Sum of ``phase_i * exp(log_i)`` as ``(log|sum|, unit phase)``."""
    finite = [lg for lg in logs if lg != -math.inf]
    if not finite:
        return -math.inf, 0j
    top = max(finite)
    total = sum(ph * math.exp(lg - top) for lg, ph in zip(logs, phases) if lg != -math.inf)
    if total == 0:
        return -math.inf, 0j
    return top + math.log(abs(total)), total / abs(total)


def _fallback(p: EsvsParams):
    return oracle.esvs_vector(p)


# --------------------------------------------------------------------------
# Wigner function


def wigner_values(p: EsvsParams, q, pm) -> np.ndarray:
    """Vectorised closed-form Wigner function; ``q`` and ``pm`` broadcast.

    W = (1/pi) C_n^-1 (-sinh 2r / 4)^n exp(-2|z|^2)
        * sum_j C(n, j) 2^j n!/(n-j)! coth^j r  H_{n-j}(i c z) H_{n-j}(i c z*)

    with z = alpha cosh r - alpha* sinh r and c = sqrt(2 / tanh r). For r > 0
    the Hermite product equals (-1)^{n-j} |H_{n-j}(-i c z)|^2; written as a
    product it stays valid for negative r, where c is imaginary.
    """
    if not p.closed_form_ok:
        q_b, p_b = np.broadcast_arrays(np.asarray(q, float), np.asarray(pm, float))
        v = _fallback(p)
        out = np.empty(q_b.shape)
        for idx in np.ndindex(q_b.shape):
            out[idx] = oracle.oracle_wigner(v, PhasePoint(float(q_b[idx]), float(p_b[idx])))
        return out

    r, n = p.r, p.n
    alpha = (np.asarray(q, float) + 1j * np.asarray(pm, float)) / math.sqrt(2.0)
    z = alpha * math.cosh(r) - np.conj(alpha) * math.sinh(r)
    c = np.sqrt(complex(2.0 / math.tanh(r)))
    x, y = 1j * c * z, 1j * c * np.conj(z)
    coth = 1.0 / math.tanh(r)

    total = np.zeros(np.shape(z), dtype=complex)
    for j in range(n + 1):
        coef = math.comb(n, j) * math.exp(j * math.log(2.0) + log_factorial(n) - log_factorial(n - j))
        total = total + coef * coth**j * hermite(n - j, x) * hermite(n - j, y)

    s2 = -math.sinh(2.0 * r) / 4.0
    log_pref = n * math.log(abs(s2)) - log_esvs_norm(p)
    sign = -1.0 if (s2 < 0 and n % 2) else 1.0
    w = sign * math.exp(log_pref) * np.exp(-2.0 * np.abs(z) ** 2) * total / math.pi
    return np.real(w)


def wigner(p: EsvsParams, pt: PhasePoint) -> float:
    """W(q, p) normalised so that its integral over dq dp is 1."""
    return float(wigner_values(p, pt.q, pt.p))


def wigner_grid(p: EsvsParams, q_range, p_range, steps: int) -> PhaseGrid:
    """Evaluate W on a ``steps x steps`` grid; rows are q, columns are p."""
    if steps < 2:
        raise ValueError("steps must be at least 2")
    qs = np.linspace(float(q_range[0]), float(q_range[1]), steps)
    ps = np.linspace(float(p_range[0]), float(p_range[1]), steps)
    if not (np.all(np.isfinite(qs)) and np.all(np.isfinite(ps))):
        raise ValueError("grid ranges must be finite")
    w = wigner_values(p, qs[:, None], ps[None, :])
    return PhaseGrid(qs, ps, w)


# --------------------------------------------------------------------------
# Photon statistics


def pnd(p: EsvsParams, m: int) -> float:
    """Probability of ``m`` photons.

    P_m = C_n^-1 / cosh r * m! / ((m-n)!)^2 * (tanh r / 2)^(m-n) * H_{m-n}(0)^2,
    exactly zero for m < n or odd m - n.
    """
    if m < 0:
        raise ValueError("photon number must be non-negative")
    d = m - p.n
    if d < 0 or d % 2:
        return 0.0
    t = math.tanh(p.r)
    if d > 0 and t == 0.0:
        return 0.0
    log_h0, _ = log_hermite_zero(d)
    log_p = (
        log_factorial(m)
        - 2.0 * log_factorial(d)
        + (d * math.log(abs(t) / 2.0) if d else 0.0)
        + 2.0 * log_h0
        - log_esvs_norm(p)
        - math.log(math.cosh(p.r))
    )
    return math.exp(log_p)


def moment(p: EsvsParams, k: int, l: int) -> complex:
    """<a^k a^dagger^l> from the double-Hermite sum.

    C_n^-1 (-i)^k i^l (sinh 2r / 4)^{n + (k+l)/2}
      * sum_j C(n+k, j) (-1)^{n+k-j} 2^j (n+l)!/(n+l-j)! coth^j r H_{n+l-j}(0) H_{n+k-j}(0)

    Only terms with n+k-j and n+l-j even survive, so the result vanishes
    for odd k + l and is real otherwise.
    """
    if k < 0 or l < 0:
        raise ValueError("k and l must be non-negative")
    if (k + l) % 2:
        return 0j
    if not p.closed_form_ok:
        return oracle.oracle_moment(_fallback(p), k, l)

    n, r = p.n, p.r
    coth = 1.0 / math.tanh(r)
    logs, phases = [], []
    for j in range(0, min(n + k, n + l) + 1):
        if (n + k - j) % 2:
            continue
        lh1, s1 = log_hermite_zero(n + l - j)
        lh2, s2 = log_hermite_zero(n + k - j)
        logs.append(
            math.log(math.comb(n + k, j))
            + j * math.log(2.0 * abs(coth))
            + log_factorial(n + l)
            - log_factorial(n + l - j)
            + lh1
            + lh2
        )
        phases.append(s1 * s2 * (-1.0 if (coth < 0 and j % 2) else 1.0))
    log_sum, phase = _signed_logsum(logs, phases)
    if log_sum == -math.inf:
        return 0j
    x = math.sinh(2.0 * r) / 4.0
    power = n + (k + l) // 2
    log_val = log_sum + power * math.log(abs(x)) - log_esvs_norm(p)
    phase *= (-1j) ** k * (1j) ** l * (-1.0 if (x < 0 and power % 2) else 1.0)
    val = phase * math.exp(log_val)
    return complex(val.real, 0.0) if abs(val.imag) <= 1e-12 * abs(val) else val


def mean_photons(p: EsvsParams) -> float:
    """<a^dagger a> = C_{n+1}/C_n - 1."""
    return norm_ratio(p, 1) - 1.0


def mandel_q(p: EsvsParams) -> float:
    """Mandel Q = (C_{n+2} - 2C_n)/(C_{n+1} - C_n) - C_{n+1}/C_n - 3.

    Raises:
        ZeroMeanPhotonNumberError: if <a^dagger a> <= 1e-12.
    """
    rho1 = norm_ratio(p, 1)
    rho2 = norm_ratio(p, 2)
    mean = rho1 - 1.0
    if mean <= 1e-12:
        raise ZeroMeanPhotonNumberError(f"<a^dagger a> = {mean:.3e} at n={p.n}, r={p.r}")
    q = (rho2 - 2.0) / mean - rho1 - 3.0
    if __debug__ and p.closed_form_ok:
        # same Q from the general moments: <a^dagger a> = <a a^dagger> - 1,
        # <a^dagger^2 a^2> = <a^2 a^dagger^2> - 4<a^dagger a> - 2
        n1 = moment(p, 1, 1).real - 1.0
        n2 = moment(p, 2, 2).real - 4.0 * n1 - 2.0
        q_mom = n2 / n1 - n1
        if not math.isclose(q, q_mom, rel_tol=1e-8, abs_tol=1e-8):
            raise InternalInconsistencyError(f"Mandel Q mismatch: {q} vs moments {q_mom}")
    return q


def quadrature(p: EsvsParams) -> QuadratureReport:
    """Quadrature variances with M = <a^2> and N = C_{n+1}/C_n - 1."""
    if not p.closed_form_ok:
        return oracle.oracle_quadrature(_fallback(p))
    return QuadratureReport.from_moments(moment(p, 2, 0).real, mean_photons(p))


def gaussian_ref(p: EsvsParams) -> GaussianRefParams:
    """Squeezed thermal state with the same first and second moments."""
    if not p.closed_form_ok:
        return oracle.oracle_gaussian_ref(_fallback(p))
    return GaussianRefParams.from_moments(moment(p, 2, 0).real, mean_photons(p))


# --------------------------------------------------------------------------
# Overlaps


def _log_lambda(r: float, varsigma: float, m: int, n: int) -> tuple[float, complex]:
    """``(log|Lambda|, phase)`` for Lambda = <0|S^-1(r) a^n S(varsigma)|m>.

    With nu = varsigma - r the overlap is

        (-i)^n n! sqrt(m! / cosh nu) sum_k (i cosh r sech nu)^k / k!
            * P^{(n-k)/2} / ((n-k)/2)! * (-tanh(nu)/2)^{(m-k)/2} / ((m-k)/2)!

    with P = -(sinh r cosh r + cosh^2 r tanh nu) / 2 and k running over
    values with n - k and m - k both even. The half-integer powers of the
    textbook form pair up into these integer powers, which fixes every sign
    and keeps the expression finite as r -> 0 or varsigma -> r.
    """
    if m < 0 or n < 0:
        raise ValueError("m and n must be non-negative")
    if (m - n) % 2:
        return -math.inf, 0j
    nu = varsigma - r
    ch = math.cosh(r)
    big_p = -(math.sinh(r) * ch + ch * ch * math.tanh(nu)) / 2.0
    g = -math.tanh(nu) / 2.0
    cross = ch / math.cosh(nu)

    logs, phases = [], []
    for k in range(min(m, n) + 1):
        if (n - k) % 2:
            continue
        j, l = (n - k) // 2, (m - k) // 2
        if (j and big_p == 0.0) or (l and g == 0.0):
            continue
        lg = k * math.log(cross) - log_factorial(k) - log_factorial(j) - log_factorial(l)
        if j:
            lg += j * math.log(abs(big_p))
        if l:
            lg += l * math.log(abs(g))
        ph = (1j) ** k
        if big_p < 0 and j % 2:
            ph = -ph
        if g < 0 and l % 2:
            ph = -ph
        logs.append(lg)
        phases.append(ph)
    log_sum, phase = _signed_logsum(logs, phases)
    if log_sum == -math.inf:
        return -math.inf, 0j
    log_val = log_sum + log_factorial(n) + 0.5 * log_factorial(m) - 0.5 * math.log(math.cosh(nu))
    return log_val, phase * (-1j) ** n


def lambda_overlap(r: float, varsigma: float, m: int, n: int) -> complex:
    """Lambda(r, varsigma, m, n) = <0| S^-1(r) a^n S(varsigma) |m>."""
    log_val, phase = _log_lambda(float(r), float(varsigma), m, n)
    if log_val == -math.inf:
        return 0j
    return complex(phase * math.exp(log_val))


def non_gaussianity(p: EsvsParams, tol: float = 1e-12, max_terms: int = 4096) -> NonGaussReport:
    """Hilbert-Schmidt non-Gaussianity against the moment-matched squeezed thermal state.

    kappa = C_n^-1 sum_m nbar^m / (1 + nbar)^{m+1} |Lambda(r, s, m, n)|^2 is
    summed over m of the same parity as n. Since sum_m |Lambda|^2 = C_n, the
    remaining tail after term m is at most w_{m+1} (1 - partial mass), which
    is the bound the loop stops on.

    Raises:
        NonConvergenceError: if ``max_terms`` terms do not bring the tail
            bound under ``tol``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_terms < 16:
        raise ValueError("max_terms must be at least 16")
    if not p.closed_form_ok:
        return oracle.oracle_nongauss(_fallback(p))

    gp = gaussian_ref(p)
    mu_tau = gp.purity
    log_cn = log_esvs_norm(p)
    nbar = gp.nbar

    if nbar == 0.0:
        log_l, _ = _log_lambda(p.r, gp.varsigma, 0, p.n)
        kappa = 0.0 if log_l == -math.inf else math.exp(2.0 * log_l - log_cn)
        terms, bound = 1, 0.0
    else:
        log_q = math.log(nbar / (1.0 + nbar))
        log_w0 = -math.log1p(nbar)
        kappa = mass = 0.0
        bound = math.inf
        terms = 0
        m = p.n % 2
        while True:
            log_l, _ = _log_lambda(p.r, gp.varsigma, m, p.n)
            terms += 1
            if log_l != -math.inf:
                share = math.exp(2.0 * log_l - log_cn)
                mass += share
                kappa += math.exp(log_w0 + m * log_q) * share
            bound = math.exp(log_w0 + (m + 1) * log_q) * max(0.0, 1.0 - mass)
            if bound < tol:
                break
            if terms >= max_terms:
                raise NonConvergenceError(
                    f"kappa series not converged after {terms} terms (bound {bound:.3e})",
                    partial=kappa,
                    bound=bound,
                    terms=terms,
                )
            m += 2

    delta = 0.5 + 0.5 * mu_tau - kappa
    return NonGaussReport(
        delta=delta, ref=gp, kappa=kappa, mu_tau=mu_tau, terms_used=terms, tail_bound=bound
    )


def fidelity(e: EsvsParams, s: PssvsParams) -> float:
    """F = |Gamma|^2 / (C_n C_m) with Gamma = <0|S^-1(r) a^{m+n} S(lam)|0>.

    Gamma is the overlap Lambda(r, lam, 0, m + n). Clipped to [0, 1 + 1e-9].
    """
    total = e.n + s.m
    if total % 2:
        return 0.0
    log_g, _ = _log_lambda(e.r, s.lam, 0, total)
    if log_g == -math.inf:
        return 0.0
    f = math.exp(2.0 * log_g - log_esvs_norm(e) - log_pssvs_norm(s))
    return min(max(f, 0.0), FIDELITY_CAP)
