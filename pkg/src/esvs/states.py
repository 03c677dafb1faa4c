"""Parameter objects for the three state families and their normalisations.

Conventions used throughout the package:

* squeezing operator ``S(r) = exp[(r/2)(a^dagger^2 - a^2)]``, so that
  ``S(r)^-1 a S(r) = a cosh r + a^dagger sinh r``;
* photon-added (excited) squeezed vacuum ``a^dagger^n S(r)|0>``, norm C_n;
* photon-subtracted squeezed vacuum ``a^m S(lam)|0>``, norm C_m;
* reference squeezed thermal state ``S(s) nu(nbar) S(s)^-1``.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConventionViolationError,
    InsufficientDimensionError,
    InternalInconsistencyError,
    MagnitudeOverflowError,
)
from .fock import FockVector
from .specfun import legendre_scaled, log_factorial

# Below this squeezing, coth r and 1/tanh r lose too much precision for the
# closed forms; metric functions hand such states to the Fock-space oracle.
R_MIN = 1e-6
TOL_NEG = 1e-12
# Relative tolerance on discarded imaginary parts of real-valued results.
IMAG_RTOL = 1e-10

_LOG_FLOAT_MAX = math.log(np.finfo(float).max)


def _check_count(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {value!r}")
    if value < 0:
        raise ValueError(f"{name} must be non-negative, got {value}")
    return int(value)


def _check_real(value, name: str) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value}")
    return value


def real_part(z: complex, what: str = "value") -> float:
    """Drop the imaginary part of ``z`` after checking it is only round-off."""
    z = complex(z)
    if abs(z.imag) > IMAG_RTOL * max(abs(z.real), 1e-300):
        raise ConventionViolationError(
            f"{what} should be real but has imaginary residue {z.imag:.3e} (real part {z.real:.3e})"
        )
    return z.real


@dataclass(frozen=True)
class EsvsParams:
    """Squeezing ``r`` and number of added photons ``n``."""

    r: float
    n: int

    def __post_init__(self):
        object.__setattr__(self, "r", _check_real(self.r, "r"))
        object.__setattr__(self, "n", _check_count(self.n, "n"))

    @property
    def closed_form_ok(self) -> bool:
        return abs(self.r) >= R_MIN

    def shifted(self, dn: int) -> "EsvsParams":
        return EsvsParams(self.r, self.n + dn)


@dataclass(frozen=True)
class PssvsParams:
    """Squeezing ``lam`` and number of subtracted photons ``m``."""

    lam: float
    m: int

    def __post_init__(self):
        lam = _check_real(self.lam, "lambda")
        m = _check_count(self.m, "m")
        if abs(lam) < R_MIN and m > 0:
            # a^m |0> vanishes: there is no state to normalise
            raise ValueError(f"|lambda| must be >= {R_MIN} when photons are subtracted")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "m", m)


@dataclass(frozen=True)
class GaussianRefParams:
    """Squeezed thermal reference state: squeezing ``varsigma``, mean thermal number ``nbar``."""

    varsigma: float
    nbar: float

    def __post_init__(self):
        nbar = _check_real(self.nbar, "nbar")
        if nbar < -TOL_NEG:
            raise ValueError(f"nbar must be non-negative, got {nbar}")
        object.__setattr__(self, "varsigma", _check_real(self.varsigma, "varsigma"))
        object.__setattr__(self, "nbar", max(nbar, 0.0))

    @property
    def purity(self) -> float:
        """Tr[tau^2] = 1 / (1 + 2 nbar)."""
        return 1.0 / (1.0 + 2.0 * self.nbar)

    @classmethod
    def from_moments(cls, m_val: float, n_val: float) -> "GaussianRefParams":
        """Match <a^2> = ``m_val`` and <a^dagger a> = ``n_val`` with a squeezed thermal state.

        Uses <a^2> = (2 nbar + 1) sinh s cosh s and
        <a^dagger a> = nbar cosh^2 s + (nbar + 1) sinh^2 s.
        """
        two_n1 = 2.0 * n_val + 1.0
        det = two_n1 * two_n1 - 4.0 * m_val * m_val
        if det < 1.0 - 1e-9:
            raise InternalInconsistencyError(
                f"moments violate the uncertainty bound: (2N+1)^2 - 4M^2 = {det:.12g} < 1"
            )
        varsigma = 0.25 * math.log((two_n1 + 2.0 * m_val) / (two_n1 - 2.0 * m_val))
        nbar = (math.sqrt(max(det, 1.0)) - 1.0) / 2.0
        if abs(nbar) <= TOL_NEG:
            nbar = 0.0
        return cls(varsigma, nbar)


def log_esvs_norm(p: EsvsParams) -> float:
    """ln C_n with C_n = n! cosh^n r P_n(cosh r)."""
    ch = math.cosh(p.r)
    mant, scale = legendre_scaled(p.n, ch)
    return log_factorial(p.n) + p.n * math.log(ch) + scale + math.log(mant.real)


def esvs_norm(p: EsvsParams) -> float:
    """Normalisation constant C_n = <0|S^-1(r) a^n a^dagger^n S(r)|0>."""
    log_c = log_esvs_norm(p)
    if log_c > _LOG_FLOAT_MAX:
        raise MagnitudeOverflowError(f"C_n for n={p.n}, r={p.r} overflows; use log_esvs_norm")
    return math.exp(log_c)


def log_pssvs_norm(p: PssvsParams) -> float:
    """ln C_m with C_m = m! (i sinh lam)^m P_m(-i sinh lam)."""
    if p.m == 0:
        return 0.0
    sh = math.sinh(p.lam)
    mant, scale = legendre_scaled(p.m, -1j * sh)
    # phase of (i sinh lam)^m
    phase = (1j * math.copysign(1.0, sh)) ** p.m
    unit = real_part(phase * mant, "C_m")
    if unit <= 0:
        raise ConventionViolationError(f"C_m came out non-positive ({unit})")
    return log_factorial(p.m) + p.m * math.log(abs(sh)) + scale + math.log(unit)


def pssvs_norm(p: PssvsParams) -> float:
    """Normalisation constant C_m = <0|S^-1(lam) a^dagger^m a^m S(lam)|0>."""
    log_c = log_pssvs_norm(p)
    if log_c > _LOG_FLOAT_MAX:
        raise MagnitudeOverflowError(f"C_m for m={p.m}, lambda={p.lam} overflows; use log_pssvs_norm")
    return math.exp(log_c)


def norm_ratio(p: EsvsParams, j: int) -> float:
    """C_{n+j} / C_n formed from log differences."""
    return math.exp(log_esvs_norm(p.shifted(j)) - log_esvs_norm(p))


def squeezed_vacuum_coeffs(r: float, dim: int, min_captured: float = 1.0 - 1e-10) -> FockVector:
    """Amplitudes of S(r)|0> on |0>, ..., |dim-1>.

    <2k|S(r)|0> = tanh^k(r) sqrt((2k)!) / (2^k k! sqrt(cosh r)); odd entries
    vanish. The sign follows the generator exp[(r/2)(a^dagger^2 - a^2)], which
    gives +r/sqrt(2) on |2> to first order. The truncated ket is
    renormalised; ``norm_sq`` records the captured weight.

    Raises:
        InsufficientDimensionError: if less than ``min_captured`` of the
            norm fits in ``dim`` levels.
    """
    if dim < 2:
        raise ValueError("dim must be at least 2")
    r = _check_real(r, "r")
    amps = np.zeros(dim)
    k = np.arange((dim + 1) // 2)
    if r == 0.0:
        amps[0] = 1.0
    else:
        t = math.tanh(r)
        lg = np.array([0.5 * log_factorial(2 * j) - log_factorial(j) for j in k])
        logmag = lg - k * math.log(2.0) + k * math.log(abs(t)) - 0.5 * math.log(math.cosh(r))
        sign = np.where((k % 2 == 1) & (t < 0), -1.0, 1.0)
        amps[0::2] = sign * np.exp(logmag)
    captured = float(np.sum(amps * amps))
    if captured < min_captured:
        raise InsufficientDimensionError(
            f"dim={dim} captures only {captured:.3e} of the squeezed vacuum norm at r={r}"
        )
    return FockVector(amps / math.sqrt(captured), norm_sq=captured)
