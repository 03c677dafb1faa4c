"""Containers for truncated Fock-space kets and operators."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class FockVector:
    """Ket amplitudes in the number basis |0>, ..., |dim-1>.

    ``norm_sq`` keeps the squared norm the ket had before it was normalised,
    which is how unnormalised constructions (a^dagger^n S|0>) expose their
    normalisation constants.
    """

    amps: np.ndarray
    norm_sq: float = 1.0

    def __post_init__(self):
        amps = np.array(self.amps, dtype=complex)
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def normalized(self) -> "FockVector":
        nsq = float(np.vdot(self.amps, self.amps).real)
        return FockVector(self.amps / np.sqrt(nsq), norm_sq=nsq * self.norm_sq)


@dataclass(frozen=True)
class FockOperator:
    """Dense ``dim x dim`` operator matrix in the number basis."""

    entries: np.ndarray
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        m = np.array(self.entries)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator must be square, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def is_hermitian(self, atol: float = 1e-10) -> bool:
        return bool(np.allclose(self.entries, self.entries.conj().T, atol=atol, rtol=0))


def annihilation(dim: int) -> np.ndarray:
    """Matrix of ``a`` with a[k-1, k] = sqrt(k)."""
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1)


def creation(dim: int) -> np.ndarray:
    return annihilation(dim).T.copy()


def apply_creation(amps: np.ndarray, times: int = 1) -> np.ndarray:
    """Apply a^dagger ``times`` times, growing the vector so nothing is cut."""
    v = np.asarray(amps, dtype=complex)
    for _ in range(times):
        out = np.zeros(v.shape[0] + 1, dtype=complex)
        out[1:] = v * np.sqrt(np.arange(1, v.shape[0] + 1))
        v = out
    return v


def apply_annihilation(amps: np.ndarray, times: int = 1) -> np.ndarray:
    """Apply a ``times`` times (exact on the truncated vector)."""
    v = np.asarray(amps, dtype=complex)
    for _ in range(times):
        if v.shape[0] <= 1:
            return np.zeros(1, dtype=complex)
        v = v[1:] * np.sqrt(np.arange(1, v.shape[0]))
    return v
