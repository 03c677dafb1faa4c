"""Optimal-fidelity search over the squeezing of the photon-added state."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .metrics import fidelity
from .states import R_MIN, EsvsParams, PssvsParams

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
SCAN_POINTS = 129


@dataclass(frozen=True)
class OptResult:
    r_star: float
    f_star: float
    evals: int
    bracket: tuple[float, float]
    boundary: bool = False
    degenerate: bool = False


def default_bracket(lam: float) -> tuple[float, float]:
    """[0.05, max(3, lam + 1.5)], mirrored for negative ``lam``."""
    hi = max(3.0, abs(lam) + 1.5)
    return (0.05, hi) if lam >= 0 else (-hi, -0.05)


def golden_section_max(f, a: float, b: float, tol: float):
    """Maximise a unimodal ``f`` on [a, b] until the interval is shorter than ``tol``.

    Returns ``(x_best, f_best, evals, (a, b))`` where ``(a, b)`` is the final
    interval and ``x_best`` the best point evaluated.
    """
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    evals = 2
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
        evals += 1
    x_best, f_best = (c, fc) if fc >= fd else (d, fd)
    return x_best, f_best, evals, (a, b)


def optimal_fidelity(
    n: int,
    m: int,
    lam: float,
    r_lo: float | None = None,
    r_hi: float | None = None,
    tol: float = 1e-6,
    scan_points: int = SCAN_POINTS,
) -> OptResult:
    """Maximise F(r) between the n-photon-added and m-photon-subtracted states.

    A uniform scan of ``scan_points`` values locates the best grid cell on
    [r_lo, r_hi]; golden-section search then refines inside the two
    neighbouring cells. If the best scan point is an endpoint the result is
    flagged with ``boundary=True``. Odd n + m gives F = 0 identically and
    returns at once with ``degenerate=True``.
    """
    if r_lo is None or r_hi is None:
        lo, hi = default_bracket(lam)
        r_lo = lo if r_lo is None else r_lo
        r_hi = hi if r_hi is None else r_hi
    r_lo, r_hi = float(r_lo), float(r_hi)
    if not r_lo < r_hi:
        raise ValueError(f"invalid bracket [{r_lo}, {r_hi}]")
    same_side = (r_lo >= R_MIN and r_hi >= R_MIN) or (r_lo <= -R_MIN and r_hi <= -R_MIN)
    if not same_side:
        raise ValueError(f"bracket [{r_lo}, {r_hi}] must lie on one side of |r| >= {R_MIN}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if scan_points < 3:
        raise ValueError("scan_points must be at least 3")

    sub = PssvsParams(lam, m)
    if (n + m) % 2:
        return OptResult(r_lo, 0.0, 0, (r_lo, r_hi), degenerate=True)

    def f(r):
        return fidelity(EsvsParams(r, n), sub)

    grid = np.linspace(r_lo, r_hi, scan_points)
    values = np.array([f(r) for r in grid])
    i = int(np.argmax(values))
    boundary = i == 0 or i == scan_points - 1
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, scan_points - 1)]
    x, fx, evals, bracket = golden_section_max(f, a, b, tol)
    if values[i] > fx:
        x, fx = float(grid[i]), float(values[i])
    return OptResult(
        r_star=float(x),
        f_star=float(fx),
        evals=scan_points + evals,
        bracket=(float(bracket[0]), float(bracket[1])),
        boundary=boundary,
    )


def fidelity_sweep(n: int, m: int, lambda_grid, r_grid) -> np.ndarray:
    """Table ``F[i, j] = F(n, m, lambda_grid[i], r_grid[j])``."""
    lams = np.asarray(lambda_grid, dtype=float)
    rs = np.asarray(r_grid, dtype=float)
    if not (np.all(np.isfinite(lams)) and np.all(np.isfinite(rs))):
        raise ValueError("grids must be finite")
    if np.any(np.abs(rs) < R_MIN) or np.any(np.abs(lams) < R_MIN):
        raise ValueError(f"grid values must satisfy |x| >= {R_MIN}")
    out = np.zeros((lams.size, rs.size))
    if (n + m) % 2:
        return out
    for i, lam in enumerate(lams):
        sub = PssvsParams(lam, m)
        for j, r in enumerate(rs):
            out[i, j] = fidelity(EsvsParams(r, n), sub)
    return out
