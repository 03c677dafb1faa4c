"""Plain result records shared by the closed-form and oracle code paths."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InternalInconsistencyError
from .states import GaussianRefParams

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class PhasePoint:
    """Phase-space point; ``alpha = (q + i p) / sqrt(2)``."""

    q: float
    p: float

    @property
    def alpha(self) -> complex:
        return complex(self.q, self.p) / SQRT2


@dataclass(frozen=True)
class PhaseGrid:
    """Wigner values on a q-major, p-minor grid: ``w[i, j] = W(q[i], p[j])``."""

    q: np.ndarray
    p: np.ndarray
    w: np.ndarray

    def rows(self):
        """Yield ``(q, p, w)`` triples in q-major order."""
        for i, qi in enumerate(self.q):
            for j, pj in enumerate(self.p):
                yield float(qi), float(pj), float(self.w[i, j])

    def trapezoid(self) -> float:
        """Trapezoidal estimate of the integral of W over the grid."""
        return float(np.trapezoid(np.trapezoid(self.w, self.p, axis=1), self.q))


@dataclass(frozen=True)
class QuadratureReport:
    var_x: float
    var_y: float
    product: float
    snr_x: float
    snr_y: float
    snr_xy: float
    m_val: float
    n_val: float

    @classmethod
    def from_moments(cls, m_val: float, n_val: float) -> "QuadratureReport":
        """Build the report from M = <a^2> and N = <a^dagger a> (zero mean field)."""
        var_x = m_val + n_val + 0.5
        var_y = -m_val + n_val + 0.5
        if var_x <= 0 or var_y <= 0:
            raise InternalInconsistencyError(
                f"non-positive quadrature variance: var_x={var_x}, var_y={var_y}"
            )
        det = (2.0 * n_val + 1.0) ** 2 - 4.0 * m_val * m_val
        return cls(
            var_x=var_x,
            var_y=var_y,
            product=math.sqrt(var_x * var_y),
            snr_x=math.log10(2.0 * var_x),
            snr_y=math.log10(2.0 * var_y),
            snr_xy=0.5 * math.log10(det),
            m_val=m_val,
            n_val=n_val,
        )


@dataclass(frozen=True)
class NonGaussReport:
    """Hilbert-Schmidt non-Gaussianity of a pure state and its ingredients."""

    delta: float
    ref: GaussianRefParams
    kappa: float
    mu_tau: float
    terms_used: int
    tail_bound: float
