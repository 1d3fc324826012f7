"""Euclidean projection onto the intersection of the two measurement sets.

The solution must lie in {X : block-average(X) = Z} ∩ {X : X·R = Y}.  Both
sets are affine.  The block average acts spatially (within each band) while
the spectral response acts across bands (within each pixel), so when the
measurements are mutually consistent (Z·R equals the block average of Y) the
two single-set projectors commute and their composition is the exact
projection onto the intersection.  Inconsistent measurements fall back to
Dykstra's alternating projection; both sets being affine, the correction
increments of the general algorithm are annihilated by the next projection,
so plain alternating sweeps realize it exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import HsCube, SpectralMatrix
from .operators import (
    BlockAverage,
    block_avg_adjoint,
    block_avg_apply,
    csr_adjoint,
    csr_apply,
)

# Relative consistency gap below which the composed closed form is exact.
CONSISTENCY_RTOL = 1e-8


class DykstraConvergenceError(RuntimeError):
    """Alternating projection did not settle within the sweep budget."""

    def __init__(self, sweeps: int, change: float,
                 spatial_residual: float, spectral_residual: float):
        self.sweeps = sweeps
        self.change = change
        self.spatial_residual = spatial_residual
        self.spectral_residual = spectral_residual
        super().__init__(
            f"alternating projection did not converge in {sweeps} sweeps: "
            f"last sweep changed {change:.3e}, constraint residuals "
            f"spatial={spatial_residual:.3e} spectral={spectral_residual:.3e}"
        )


@dataclass(frozen=True)
class ProjectionProblem:
    """Point to project plus the measurements defining the constraint sets."""

    point: HsCube
    low_res: HsCube
    guide: HsCube
    down: BlockAverage
    response: SpectralMatrix
    mode: str = "auto"
    dykstra_iters: int = 200
    dykstra_tol: float = 1e-9

    def __post_init__(self):
        if self.mode not in ("auto", "exact", "dykstra"):
            raise ValueError(f"unknown projection mode {self.mode!r}")
        if self.dykstra_iters < 1:
            raise ValueError("dykstra_iters must be positive")
        if self.dykstra_tol <= 0:
            raise ValueError("dykstra_tol must be positive")
        p, z, y = self.point, self.low_res, self.guide
        if (p.rows, p.cols) != (self.down.in_rows, self.down.in_cols):
            raise ValueError(
                f"point is {p.rows}x{p.cols}, block operator expects "
                f"{self.down.in_rows}x{self.down.in_cols}"
            )
        if (z.bands, z.rows, z.cols) != (p.bands, self.down.out_rows, self.down.out_cols):
            raise ValueError(
                f"low-res cube has (bands, rows, cols)=({z.bands}, {z.rows}, {z.cols}), "
                f"expected ({p.bands}, {self.down.out_rows}, {self.down.out_cols})"
            )
        if (y.bands, y.rows, y.cols) != (self.response.out_bands, p.rows, p.cols):
            raise ValueError(
                f"guide cube has (bands, rows, cols)=({y.bands}, {y.rows}, {y.cols}), "
                f"expected ({self.response.out_bands}, {p.rows}, {p.cols})"
            )
        if self.response.in_bands != p.bands:
            raise ValueError(
                f"spectral response expects {self.response.in_bands} bands, "
                f"point has {p.bands}"
            )


def project_spatial(point: HsCube, low_res: HsCube, op: BlockAverage) -> HsCube:
    """Project onto the cubes whose block averages equal ``low_res``.

    The block-average rows are mutually orthogonal with squared norm 1/B²,
    so the projection is point + B²·adjoint(low_res − blockavg(point)).
    """
    if (point.rows, point.cols) != (op.in_rows, op.in_cols):
        raise ValueError(
            f"point is {point.rows}x{point.cols}, operator expects "
            f"{op.in_rows}x{op.in_cols}"
        )
    if (low_res.bands, low_res.rows, low_res.cols) != (
            point.bands, op.out_rows, op.out_cols):
        raise ValueError(
            f"low-res cube has (bands, rows, cols)=({low_res.bands}, "
            f"{low_res.rows}, {low_res.cols}), expected "
            f"({point.bands}, {op.out_rows}, {op.out_cols})"
        )
    gap = HsCube(low_res.data - block_avg_apply(point, op).data)
    lift = block_avg_adjoint(gap, op).data * (op.block * op.block)
    return HsCube(point.data + lift)


def project_spectral(point: HsCube, guide: HsCube, r: SpectralMatrix) -> HsCube:
    """Project onto the cubes whose spectral projection equals ``guide``.

    Per pixel this is the affine least-squares correction
    x − R(RᵀR)⁻¹(Rᵀx − y); full column rank of R is enforced when the
    response matrix is constructed.
    """
    if (guide.bands, guide.rows, guide.cols) != (
            r.out_bands, point.rows, point.cols):
        raise ValueError(
            f"guide cube has (bands, rows, cols)=({guide.bands}, "
            f"{guide.rows}, {guide.cols}), expected "
            f"({r.out_bands}, {point.rows}, {point.cols})"
        )
    if r.in_bands != point.bands:
        raise ValueError(
            f"spectral response expects {r.in_bands} bands, "
            f"point has {point.bands}"
        )
    gram = r.entries.T @ r.entries
    resid = csr_apply(point, r).data - guide.data
    flat = np.linalg.solve(gram, resid.reshape(r.out_bands, -1))
    corr = csr_adjoint(HsCube(flat.reshape(resid.shape)), r)
    return HsCube(point.data - corr.data)


def consistency_residual(low_res: HsCube, guide: HsCube,
                         op: BlockAverage, r: SpectralMatrix) -> float:
    """Max-abs gap between the spectrally projected low-res cube and the
    block-averaged guide — zero exactly when both measurements can come
    from one cube."""
    zr = csr_apply(low_res, r).data
    guide_op = BlockAverage(block=op.block, in_rows=guide.rows, in_cols=guide.cols)
    ay = block_avg_apply(guide, guide_op).data
    if zr.shape != ay.shape:
        raise ValueError(
            f"projected low-res {zr.shape} does not match averaged guide {ay.shape}"
        )
    return float(np.max(np.abs(zr - ay)))


def _sweep(data: np.ndarray, prob: ProjectionProblem) -> np.ndarray:
    cube = HsCube(data)
    cube = project_spectral(cube, prob.guide, prob.response)
    cube = project_spatial(cube, prob.low_res, prob.down)
    return cube.data


def _dykstra(prob: ProjectionProblem) -> HsCube:
    data = prob.point.data
    for _ in range(prob.dykstra_iters):
        new = _sweep(data, prob)
        change = float(np.max(np.abs(new - data)))
        data = new
        if change < prob.dykstra_tol:
            return HsCube(data)
    cube = HsCube(data)
    res_spatial = float(np.max(np.abs(
        block_avg_apply(cube, prob.down).data - prob.low_res.data)))
    res_spectral = float(np.max(np.abs(
        csr_apply(cube, prob.response).data - prob.guide.data)))
    raise DykstraConvergenceError(
        prob.dykstra_iters, change, res_spatial, res_spectral)


def project_joint(prob: ProjectionProblem) -> HsCube:
    """Project ``prob.point`` onto the intersection of the measurement sets.

    ``exact`` composes the spectral and spatial projectors (valid under
    measurement consistency), ``dykstra`` iterates alternating sweeps, and
    ``auto`` measures the consistency gap and picks accordingly.
    """
    mode = prob.mode
    if mode == "auto":
        gap = consistency_residual(prob.low_res, prob.guide, prob.down, prob.response)
        scale = max(1.0, float(np.max(np.abs(prob.low_res.data))))
        mode = "exact" if gap <= CONSISTENCY_RTOL * scale else "dykstra"
    if mode == "exact":
        return HsCube(_sweep(prob.point.data, prob))
    return _dykstra(prob)
