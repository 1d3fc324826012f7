"""Exact elementwise minimizer for the gradient-domain subproblem.

Each element solves

    minimize_u  |u| + beta*|u - wbar| + c*u + (rho/2)*u**2

which is strictly convex and piecewise quadratic with kinks at 0 and wbar.
The minimizer is found by enumerating five candidates: the stationary point
of each smooth piece clipped to its interval, plus the two kinks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import FloatArray


@dataclass(frozen=True)
class ScalarProxProblem:
    """One element of the gradient-domain subproblem."""

    c: float        # linear coefficient, lambda - rho * (Dv) at this element
    wbar: float     # gradient-domain target element
    beta: float     # nonnegative trade-off weight
    rho: float      # quadratic weight, > 0

    def __post_init__(self):
        if self.rho <= 0:
            raise ValueError(f"rho must be positive, got {self.rho}")
        if self.beta < 0:
            raise ValueError(f"beta must be nonnegative, got {self.beta}")


def _min_candidates(c: FloatArray, wbar: FloatArray, beta: float, rho: float) -> FloatArray:
    lo = np.minimum(0.0, wbar)
    hi = np.maximum(0.0, wbar)

    # Signs of u and (u - wbar) are constant on each smooth piece.
    s_mid = np.where(wbar >= 0.0, 1.0, -1.0)
    cands = np.stack([
        np.minimum(-(c - 1.0 - beta) / rho, lo),             # u <= min(0, wbar)
        np.clip(-(c + s_mid * (1.0 - beta)) / rho, lo, hi),  # between the kinks
        np.maximum(-(c + 1.0 + beta) / rho, hi),             # u >= max(0, wbar)
        np.zeros_like(wbar),
        wbar,
    ])

    fvals = (np.abs(cands) + beta * np.abs(cands - wbar)
             + c * cands + 0.5 * rho * cands * cands)
    best = np.argmin(fvals, axis=0)
    return np.take_along_axis(cands, best[None, ...], axis=0)[0]


def scalar_u_min(p: ScalarProxProblem) -> float:
    """Global minimizer of |u| + beta*|u-wbar| + c*u + (rho/2)*u**2."""
    c = np.asarray([p.c], dtype=np.float64)
    wbar = np.asarray([p.wbar], dtype=np.float64)
    return float(_min_candidates(c, wbar, p.beta, p.rho)[0])


def u_update(dv: np.ndarray, lam: np.ndarray, wbar: np.ndarray,
             beta: float, rho: float) -> FloatArray:
    """Elementwise exact minimization over a gradient-domain vector.

    The linear coefficient is c = lam - rho * dv per element.
    """
    dv = np.asarray(dv, dtype=np.float64)
    lam = np.asarray(lam, dtype=np.float64)
    wbar = np.asarray(wbar, dtype=np.float64)
    if not (dv.shape == lam.shape == wbar.shape):
        raise ValueError(
            f"length mismatch: dv {dv.shape}, lambda {lam.shape}, wbar {wbar.shape}"
        )
    if rho <= 0:
        raise ValueError(f"rho must be positive, got {rho}")
    if beta < 0:
        raise ValueError(f"beta must be nonnegative, got {beta}")
    c = lam - rho * dv
    return _min_candidates(c, wbar, beta, rho)
