"""Special-function kernels: Hermite and Legendre polynomials, factorials.

Polynomials are evaluated by their three-term recurrences, which cost O(k)
and avoid the catastrophic cancellation of the explicit alternating sums.
Both accept scalars or numpy arrays, real or complex.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DegreeOverflowError, MagnitudeOverflowError

MAX_DEGREE = 512

# Largest k for which k! (and hence H_k(0)) is still safe to return as a float.
_FLOAT_FACTORIAL_MAX = 170


def _check_degree(k: int) -> None:
    if k < 0:
        raise ValueError(f"degree must be non-negative, got {k}")
    if k > MAX_DEGREE:
        raise DegreeOverflowError(f"degree {k} exceeds the cap of {MAX_DEGREE}")


def _finite_or_raise(value, what: str):
    if not np.all(np.isfinite(value)):
        raise MagnitudeOverflowError(f"{what} overflowed binary64")
    return value


def hermite(k: int, x):
    """Physicists' Hermite polynomial H_k(x).

    Uses H_{j+1}(x) = 2x H_j(x) - 2j H_{j-1}(x) starting from H_0 = 1,
    H_1 = 2x. ``x`` may be complex and may be an array.

    Raises:
        DegreeOverflowError: if ``k`` exceeds :data:`MAX_DEGREE`.
        MagnitudeOverflowError: if the result is not finite.
    """
    _check_degree(k)
    x = np.asarray(x)
    h_prev = np.ones_like(x, dtype=np.result_type(x, float))
    if k == 0:
        return h_prev[()] if h_prev.ndim == 0 else h_prev
    h = 2.0 * x
    for j in range(1, k):
        h_prev, h = h, 2.0 * x * h - 2.0 * j * h_prev
    _finite_or_raise(h, f"H_{k}")
    return h[()] if h.ndim == 0 else h


def log_hermite_zero(k: int) -> tuple[float, int]:
    """Return ``(log|H_k(0)|, sign)``; odd ``k`` gives ``(-inf, 0)``."""
    if k < 0:
        raise ValueError(f"degree must be non-negative, got {k}")
    if k % 2:
        return -math.inf, 0
    half = k // 2
    sign = -1 if half % 2 else 1
    return log_factorial(k) - log_factorial(half), sign


def hermite_zero(k: int):
    """H_k(0): 0 for odd k, (-1)^(k/2) k!/(k/2)! for even k.

    For ``k`` above 170 the magnitude no longer fits a float and the
    ``(log_magnitude, sign)`` pair from :func:`log_hermite_zero` is returned.
    """
    logmag, sign = log_hermite_zero(k)
    if k > _FLOAT_FACTORIAL_MAX:
        return logmag, sign
    if sign == 0:
        return 0.0
    if k <= 20:
        # exact integer arithmetic while it is cheap
        return float(sign * (math.factorial(k) // math.factorial(k // 2)))
    return sign * math.exp(logmag)


def legendre(k: int, z):
    """Legendre polynomial P_k(z) by Bonnet's recurrence, complex ``z`` allowed."""
    _check_degree(k)
    z = np.asarray(z)
    p_prev = np.ones_like(z, dtype=np.result_type(z, float))
    if k == 0:
        return p_prev[()] if p_prev.ndim == 0 else p_prev
    p = z * 1.0
    for j in range(1, k):
        p_prev, p = p, ((2 * j + 1) * z * p - j * p_prev) / (j + 1)
    _finite_or_raise(p, f"P_{k}")
    return p[()] if p.ndim == 0 else p


def legendre_scaled(k: int, z: complex) -> tuple[complex, float]:
    """Scalar P_k(z) as ``(mantissa, log_scale)`` with P_k = mantissa * e^log_scale.

    The recurrence is renormalised whenever the iterate gets large, so the
    pair stays representable for any degree up to the cap.
    """
    _check_degree(k)
    if k == 0:
        return complex(1.0), 0.0
    log_scale = 0.0
    p_prev, p = complex(1.0), complex(z)
    for j in range(1, k):
        p_prev, p = p, ((2 * j + 1) * z * p - j * p_prev) / (j + 1)
        big = abs(p)
        if big > 1e100:
            p_prev /= big
            p /= big
            log_scale += math.log(big)
    if p == 0:
        return 0j, 0.0
    big = abs(p)
    return p / big, log_scale + math.log(big)


def log_factorial(k: int) -> float:
    """ln(k!). Stay in the log domain for k >= 171, where k! overflows."""
    if k < 0:
        raise ValueError(f"factorial of negative integer {k}")
    if k < 2:
        return 0.0
    return math.lgamma(k + 1)


def rfactorial(j: int) -> float:
    """1/j!, with the convention 1/j! = 0 for negative integers ``j``."""
    if j < 0:
        return 0.0
    return math.exp(-log_factorial(j))
