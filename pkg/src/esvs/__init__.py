"""Nonclassicality and non-Gaussianity of photon-added squeezed vacuum states."""

from .errors import EsvsError
from .metrics import (
    fidelity,
    gaussian_ref,
    lambda_overlap,
    mandel_q,
    moment,
    non_gaussianity,
    pnd,
    quadrature,
    wigner,
    wigner_grid,
)
from .reports import NonGaussReport, PhaseGrid, PhasePoint, QuadratureReport
from .states import (
    R_MIN,
    EsvsParams,
    GaussianRefParams,
    PssvsParams,
    esvs_norm,
    pssvs_norm,
    squeezed_vacuum_coeffs,
)

__version__ = "0.1.0"
