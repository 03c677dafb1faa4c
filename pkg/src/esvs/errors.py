"""Exception types raised by the library.

All of them derive from :class:`EsvsError` so callers can catch everything the
package raises deliberately with a single ``except`` clause.
"""

from __future__ import annotations


class EsvsError(Exception):
    """Base class for every error raised on purpose by :mod:`esvs`."""


class DegreeOverflowError(EsvsError, ValueError):
    """Polynomial degree above the supported cap."""


class MagnitudeOverflowError(EsvsError, OverflowError):
    """A value does not fit in binary64; use the log-domain accessor instead."""


class ConventionViolationError(EsvsError, ArithmeticError):
    """A quantity that must be real came out with a significant imaginary part."""


class InsufficientDimensionError(EsvsError, RuntimeError):
    """The truncated Fock space is too small for the requested accuracy."""


class InternalInconsistencyError(EsvsError, ArithmeticError):
    """A physical constraint (e.g. Heisenberg) is violated by computed values."""


class ZeroMeanPhotonNumberError(EsvsError, ZeroDivisionError):
    """Mandel Q is undefined for a state with no photons on average."""


class NonConvergenceError(EsvsError, RuntimeError):
    """A truncated series did not reach its tolerance within the term budget.

    The partial sum and the last tail bound are kept so callers can decide
    whether the value is still usable.
    """

    def __init__(self, message: str, partial: float, bound: float, terms: int):
        super().__init__(message)
        self.partial = partial
        self.bound = bound
        self.terms = terms
