"""Independent reference implementations used only by the tests.

Everything here is deliberately slow and dense: explicit matrices built
entry by entry, grid searches, brute-force window loops, and an LP
formulation solved by an off-the-shelf simplex/IPM code.  None of it shares
code paths with the package, so agreement is meaningful evidence.
"""

from __future__ import annotations

import math

import numpy as np


# ---------------------------------------------------------------------------
# dense operator matrices
# ---------------------------------------------------------------------------

def dense_block_average(rows: int, cols: int, block: int) -> np.ndarray:
    """(rows//block * cols//block, rows*cols) averaging matrix, row-major
    output blocks, built from the index formula rather than any operator."""
    out_r, out_c = rows // block, cols // block
    mat = np.zeros((out_r * out_c, rows * cols))
    for bi in range(out_r):
        for bj in range(out_c):
            out_idx = bi * out_c + bj
            for di in range(block):
                for dj in range(block):
                    i, j = bi * block + di, bj * block + dj
                    mat[out_idx, i * cols + j] = 1.0 / block ** 2
    return mat


def dense_tv_matrix(rows: int, cols: int) -> np.ndarray:
    """(2*rows*cols, rows*cols) periodic forward-difference matrix: the first
    rows*cols output rows are vertical differences, the rest horizontal."""
    n = rows * cols
    mat = np.zeros((2 * n, n))
    for i in range(rows):
        for j in range(cols):
            k = i * cols + j
            mat[k, ((i + 1) % rows) * cols + j] += 1.0
            mat[k, k] -= 1.0
            mat[n + k, i * cols + (j + 1) % cols] += 1.0
            mat[n + k, k] -= 1.0
    return mat


def dense_constraints(rows: int, cols: int, bands: int, block: int,
                      response: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Dense matrices of both measurement maps acting on the band-major
    vectorization of a cube: returns (spatial, spectral) where
    spatial @ vec(x) = vec(z) and spectral @ vec(x) = vec(y)."""
    n = rows * cols
    spatial = np.kron(np.eye(bands), dense_block_average(rows, cols, block))
    spectral = np.kron(response.T, np.eye(n))
    return spatial, spectral


# ---------------------------------------------------------------------------
# projection oracles
# ---------------------------------------------------------------------------

def kkt_projection(point: np.ndarray, c_mat: np.ndarray,
                   b_vec: np.ndarray) -> np.ndarray:
    """Euclidean projection onto {x : C x = b} via the normal equations,
    using a pseudoinverse so redundant (consistent) rows are harmless."""
    gram = c_mat @ c_mat.T
    resid = c_mat @ point - b_vec
    return point - c_mat.T @ (np.linalg.pinv(gram) @ resid)


def alternating_limit(point: np.ndarray, a_mat: np.ndarray, a_rhs: np.ndarray,
                      r_mat: np.ndarray, r_rhs: np.ndarray) -> np.ndarray:
    """Closed-form limit of the alternating sweep x -> P_A(P_R(x)) started at
    ``point``.  For affine sets this is also the Dykstra limit, whether or not
    the two sets intersect.

    With P_S(x) = Q_S x + c_S (Q_S the orthogonal projector onto the
    direction space), one sweep is x -> G x + d with G = Q_A Q_R and
    d = Q_A c_R + c_A.  Splitting along L = null(A) ∩ null(R), where G acts
    as the identity, the iteration converges to P_L x0 + (I - G)^+ d.
    """
    n = point.size

    def affine_projector(mat, rhs):
        pinv = np.linalg.pinv(mat)
        return np.eye(n) - pinv @ mat, pinv @ rhs

    q_a, c_a = affine_projector(a_mat, a_rhs)
    q_r, c_r = affine_projector(r_mat, r_rhs)
    g = q_a @ q_r
    d = q_a @ c_r + c_a

    stacked = np.vstack([a_mat, r_mat])
    _, svals, vh = np.linalg.svd(stacked)
    rank = int(np.sum(svals > 1e-10 * svals[0]))
    null_basis = vh[rank:].T
    p_l = null_basis @ null_basis.T
    return p_l @ point + np.linalg.pinv(np.eye(n) - g) @ d


# ---------------------------------------------------------------------------
# scalar prox oracle
# ---------------------------------------------------------------------------

def prox_objective(u, c, wbar, beta, rho):
    return np.abs(u) + beta * np.abs(u - wbar) + c * u + 0.5 * rho * u ** 2


def prox_oracle(c: float, wbar: float, beta: float, rho: float) -> float:
    """Minimizer of the scalar prox objective by coarse grid search followed
    by golden-section refinement (valid because the objective is strictly
    convex, hence unimodal)."""
    span = 1.5 * (abs(wbar) + (1.0 + beta + abs(c)) / rho) + 1.0
    grid = np.linspace(-span, span, 20001)
    vals = prox_objective(grid, c, wbar, beta, rho)
    k = int(np.argmin(vals))
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, grid.size - 1)]

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1 = prox_objective(x1, c, wbar, beta, rho)
    f2 = prox_objective(x2, c, wbar, beta, rho)
    for _ in range(160):
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = prox_objective(x1, c, wbar, beta, rho)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = prox_objective(x2, c, wbar, beta, rho)
    return 0.5 * (a + b)


def prox_subgradient_gap(u: float, c: float, wbar: float, beta: float,
                         rho: float) -> float:
    """Distance from 0 to the subdifferential of the prox objective at u."""
    smooth = c + rho * u
    abs_part = (-1.0, 1.0) if u == 0 else (np.sign(u),) * 2
    shift_part = (-beta, beta) if u == wbar else (beta * np.sign(u - wbar),) * 2
    lo = smooth + abs_part[0] + shift_part[0]
    hi = smooth + abs_part[1] + shift_part[1]
    if lo <= 0.0 <= hi:
        return 0.0
    return min(abs(lo), abs(hi))


# ---------------------------------------------------------------------------
# structural-similarity brute force
# ---------------------------------------------------------------------------

def brute_ssim_plane(est: np.ndarray, ref: np.ndarray, window: int = 11,
                     sigma: float = 1.5, k1: float = 0.01,
                     k2: float = 0.03) -> float:
    """Gaussian-weighted SSIM mean over all fully interior windows, computed
    one window at a time with explicit weighted moments."""
    half = window // 2
    offsets = np.arange(window) - half
    taps = np.exp(-0.5 * (offsets / sigma) ** 2)
    taps /= taps.sum()
    weights = np.outer(taps, taps)
    c1, c2 = k1 ** 2, k2 ** 2
    rows, cols = est.shape
    values = []
    for i in range(rows - window + 1):
        for j in range(cols - window + 1):
            pa = est[i:i + window, j:j + window]
            pb = ref[i:i + window, j:j + window]
            mu1 = float((weights * pa).sum())
            mu2 = float((weights * pb).sum())
            var1 = float((weights * pa * pa).sum()) - mu1 ** 2
            var2 = float((weights * pb * pb).sum()) - mu2 ** 2
            cov = float((weights * pa * pb).sum()) - mu1 * mu2
            num = (2.0 * mu1 * mu2 + c1) * (2.0 * cov + c2)
            den = (mu1 ** 2 + mu2 ** 2 + c1) * (var1 + var2 + c2)
            values.append(num / den)
    return float(np.mean(values))


# ---------------------------------------------------------------------------
# full-problem LP oracle
# ---------------------------------------------------------------------------

def lp_tvtv_optimum(w_vec: np.ndarray, z_vec: np.ndarray, y_vec: np.ndarray,
                    rows: int, cols: int, bands: int, block: int,
                    response: np.ndarray, beta: float) -> float:
    """Globally optimal objective of the TV-TV program at toy sizes, via the
    standard LP epigraph reformulation solved with scipy's HiGHS backend."""
    from scipy.optimize import linprog

    n_pix = rows * cols
    n_var = bands * n_pix
    diff_full = np.kron(np.eye(bands), dense_tv_matrix(rows, cols))
    m = diff_full.shape[0]
    spatial, spectral = dense_constraints(rows, cols, bands, block, response)
    dw = diff_full @ w_vec

    cost = np.concatenate([np.zeros(n_var), np.ones(m), beta * np.ones(m)])
    zero_m = np.zeros((m, m))
    eye_m = np.eye(m)
    a_ub = np.block([
        [diff_full, -eye_m, zero_m],
        [-diff_full, -eye_m, zero_m],
        [diff_full, zero_m, -eye_m],
        [-diff_full, zero_m, -eye_m],
    ])
    b_ub = np.concatenate([np.zeros(m), np.zeros(m), dw, -dw])
    a_eq = np.block([
        [spatial, np.zeros((spatial.shape[0], 2 * m))],
        [spectral, np.zeros((spectral.shape[0], 2 * m))],
    ])
    b_eq = np.concatenate([z_vec, y_vec])
    result = linprog(cost, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq,
                     bounds=[(None, None)] * (n_var + 2 * m), method="highs")
    if result.status != 0:
        raise RuntimeError(f"LP oracle failed: {result.message}")
    return float(result.fun)
