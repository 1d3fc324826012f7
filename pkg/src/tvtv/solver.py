"""ADMM solver for TV-TV minimization.

Solves, per cube,

    minimize_X  TV(X) + beta*TV(X - W)
    subject to  block-average(X) = Z  and  X*R = Y

by splitting each band into a gradient copy u_s = D v_s and a cube copy
x_s = v_s.  One iteration runs the exact elementwise prox for u, a joint
projection onto the measurement sets for X, an FFT solve of the periodic
normal equations for v, and gradient-ascent steps on the two duals.
Residuals are root-mean-square normalized so the stopping threshold is
independent of cube size.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .core import FloatArray, HsCube, SolverConfig, SpectralMatrix
from .operators import (
    BlockAverage,
    TvDiff,
    block_avg_apply,
    csr_apply,
    tv_adjoint,
    tv_apply,
    tv_norm,
)
from .projection import (
    CONSISTENCY_RTOL,
    ProjectionProblem,
    consistency_residual,
    project_joint,
)
from .prox import u_update


@dataclass
class SolverState:
    """Mutable iteration state.  Per-band vectors are stacked row-wise:
    ``u``/``lam`` hold one length-2*rows*cols gradient vector per band,
    ``v``/``mu`` one length-rows*cols pixel vector per band."""

    x: HsCube
    u: FloatArray
    v: FloatArray
    lam: FloatArray
    mu: FloatArray
    v_prev: FloatArray | None = None
    iteration: int = 0
    primal_history: list[float] = field(default_factory=list)
    dual_history: list[float] = field(default_factory=list)


@dataclass(frozen=True)
class SolveReport:
    """Convergence summary returned alongside the reconstruction."""

    iterations: int
    stop_reason: str            # "residual" or "max_iters"
    primal_res: float
    dual_res: float
    objective: float            # TV(xhat) + beta*TV(xhat - base)
    res_spatial: float          # max-abs violation of the block-average constraint
    res_spectral: float         # max-abs violation of the spectral constraint
    wall_time_s: float


def laplacian_symbol(rows: int, cols: int) -> FloatArray:
    """Eigenvalues of the periodic difference normal matrix DᵀD on the
    half-spectrum grid of rfft2: 2(1-cos(2πp/rows)) + 2(1-cos(2πq/cols))."""
    row_eig = 2.0 - 2.0 * np.cos(2.0 * np.pi * np.arange(rows) / rows)
    col_eig = 2.0 - 2.0 * np.cos(2.0 * np.pi * np.arange(cols // 2 + 1) / cols)
    return row_eig[:, None] + col_eig[None, :]


def v_update(u_s: np.ndarray, x_s: np.ndarray, lam_s: np.ndarray,
             mu_s: np.ndarray, rho: float, diff: TvDiff,
             symbol: FloatArray) -> FloatArray:
    """Exact solve of (ρI + ρDᵀD) v = μ + ρx + Dᵀ(λ + ρu) for one band.

    ``x_s`` and ``mu_s`` are pixel vectors, ``u_s`` and ``lam_s`` gradient
    vectors; the circulant system is diagonalized by the 2-D DFT.
    """
    rhs = mu_s + rho * x_s + tv_adjoint(lam_s + rho * u_s, diff).ravel()
    plane = rhs.reshape(diff.rows, diff.cols)
    vhat = np.fft.rfft2(plane) / (rho * (1.0 + symbol))
    return np.fft.irfft2(vhat, s=(diff.rows, diff.cols)).ravel()


def dual_update(state: SolverState, rho: float, diff: TvDiff) -> SolverState:
    """Ascent step on both duals: λ += ρ(u − Dv), μ += ρ(x − v)."""
    x_flat = state.x.data.reshape(state.x.bands, -1)
    for s in range(state.x.bands):
        dv = tv_apply(state.v[s].reshape(diff.rows, diff.cols), diff)
        state.lam[s] += rho * (state.u[s] - dv)
        state.mu[s] += rho * (x_flat[s] - state.v[s])
    return state


def residuals(state: SolverState, rho: float, diff: TvDiff) -> tuple[float, float]:
    """Root-mean-square primal and dual residuals of the current splitting.

    Primal measures violation of u = Dv and x = v; dual measures the change
    of v between iterations pushed through the splitting, ρ·[D(Δv); Δv].
    Both stack 3*rows*cols entries per band and divide by
    sqrt(bands * 3 * rows * cols), so thresholds are size-independent.
    """
    if state.iteration < 1 or state.v_prev is None:
        raise ValueError("residuals requested before the first iteration")
    rows, cols = diff.rows, diff.cols
    x_flat = state.x.data.reshape(state.x.bands, -1)
    primal_sq = 0.0
    dual_sq = 0.0
    for s in range(state.x.bands):
        dv = tv_apply(state.v[s].reshape(rows, cols), diff)
        primal_sq += float(np.sum((state.u[s] - dv) ** 2))
        primal_sq += float(np.sum((x_flat[s] - state.v[s]) ** 2))
        delta = state.v[s] - state.v_prev[s]
        dual_sq += float(np.sum(tv_apply(delta.reshape(rows, cols), diff) ** 2))
        dual_sq += float(np.sum(delta ** 2))
    norm = math.sqrt(state.x.bands * 3.0 * rows * cols)
    return math.sqrt(primal_sq) / norm, rho * math.sqrt(dual_sq) / norm


def _require_finite(arr: np.ndarray, stage: str, iteration: int) -> None:
    if not np.isfinite(arr).all():
        raise RuntimeError(
            f"{stage} produced non-finite values at iteration {iteration}"
        )


def solve_tvtv(base: HsCube, low_res: HsCube, guide: HsCube,
               response: SpectralMatrix, config: SolverConfig,
               workers: int | None = None) -> tuple[HsCube, SolveReport]:
    """Refine ``base`` into a reconstruction satisfying both measurements.

    Iterates until the primal or the dual residual drops below
    ``config.residual_tol`` or ``config.max_iters`` is reached, then applies
    one final joint projection so the output is feasible for either stop
    reason.  ``workers`` caps the band-parallel thread count; ``None``
    defers to ``config.parallel_bands``.
    """
    t0 = time.perf_counter()
    rows, cols, bands = base.rows, base.cols, base.bands
    down = BlockAverage(block=config.block, in_rows=rows, in_cols=cols)
    diff = TvDiff(rows=rows, cols=cols)
    symbol = laplacian_symbol(rows, cols)

    mode = config.projection_mode
    if mode == "auto":
        gap = consistency_residual(low_res, guide, down, response)
        scale = max(1.0, float(np.max(np.abs(low_res.data))))
        mode = "exact" if gap <= CONSISTENCY_RTOL * scale else "dykstra"
    template = ProjectionProblem(
        point=base, low_res=low_res, guide=guide, down=down,
        response=response, mode=mode,
        dykstra_iters=config.dykstra_iters, dykstra_tol=config.dykstra_tol,
    )

    beta, rho = config.beta, config.rho
    wbar = np.stack([tv_apply(base.data[s], diff) for s in range(bands)])
    state = SolverState(
        x=base,
        u=wbar.copy(),
        v=base.data.reshape(bands, -1).copy(),
        lam=np.zeros((bands, diff.n_out)),
        mu=np.zeros((bands, diff.n_pixels)),
    )

    if workers is None:
        workers = min(bands, 4) if config.parallel_bands else 1
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None

    def map_bands(fn):
        if pool is None:
            return [fn(s) for s in range(bands)]
        return list(pool.map(fn, range(bands)))

    stop_reason = "max_iters"
    try:
        for k in range(1, config.max_iters + 1):
            def u_task(s):
                dv = tv_apply(state.v[s].reshape(rows, cols), diff)
                return u_update(dv, state.lam[s], wbar[s], beta, rho)

            state.u = np.stack(map_bands(u_task))
            _require_finite(state.u, "u-update", k)

            point = state.v.reshape(bands, rows, cols) - \
                state.mu.reshape(bands, rows, cols) / rho
            _require_finite(point, "x-update input", k)
            state.x = project_joint(replace(template, point=HsCube(point)))
            _require_finite(state.x.data, "x-update", k)

            x_flat = state.x.data.reshape(bands, -1)

            def v_task(s):
                return v_update(state.u[s], x_flat[s], state.lam[s],
                                state.mu[s], rho, diff, symbol)

            state.v_prev = state.v
            state.v = np.stack(map_bands(v_task))
            _require_finite(state.v, "v-update", k)

            dual_update(state, rho, diff)
            _require_finite(state.lam, "dual update", k)
            _require_finite(state.mu, "dual update", k)

            state.iteration = k
            primal, dual = residuals(state, rho, diff)
            state.primal_history.append(primal)
            state.dual_history.append(dual)
            if primal < config.residual_tol or dual < config.residual_tol:
                stop_reason = "residual"
                break
    finally:
        if pool is not None:
            pool.shutdown()

    xhat = project_joint(replace(template, point=state.x))
    objective = tv_norm(xhat) + beta * tv_norm(HsCube(xhat.data - base.data))
    res_spatial = float(np.max(np.abs(
        block_avg_apply(xhat, down).data - low_res.data)))
    res_spectral = float(np.max(np.abs(
        csr_apply(xhat, response).data - guide.data)))
    report = SolveReport(
        iterations=state.iteration,
        stop_reason=stop_reason,
        primal_res=state.primal_history[-1],
        dual_res=state.dual_history[-1],
        objective=objective,
        res_spatial=res_spatial,
        res_spectral=res_spectral,
        wall_time_s=time.perf_counter() - t0,
    )
    return xhat, report
