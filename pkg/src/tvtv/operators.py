"""Matrix-free linear operators: block-average downscaler, spectral mixer, TV difference.

Each operator comes with an exact adjoint. The TV difference uses periodic
boundaries, which makes the associated Laplacian diagonal in the 2-D DFT
basis (see ``solver.v_update``). Dense matrices for these operators are only
ever built inside test oracles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import FloatArray, HsCube, SpectralMatrix


@dataclass(frozen=True)
class BlockAverage:
    """Averaging over non-overlapping block x block windows.

    As a matrix each row holds block**2 entries equal to 1/block**2 with
    disjoint supports, so A @ A.T = (1/block**2) * I on the low-res space.
    """

    block: int
    in_rows: int
    in_cols: int

    def __post_init__(self):
        if self.block < 1:
            raise ValueError(f"block must be positive, got {self.block}")
        if self.in_rows < 1 or self.in_cols < 1:
            raise ValueError(f"input dimensions must be positive, got {self.in_rows}x{self.in_cols}")
        if self.in_rows % self.block or self.in_cols % self.block:
            raise ValueError(
                f"input dimensions {self.in_rows}x{self.in_cols} not divisible by block {self.block}"
            )

    @property
    def out_rows(self) -> int:
        return self.in_rows // self.block

    @property
    def out_cols(self) -> int:
        return self.in_cols // self.block


def block_avg_apply(cube: HsCube, op: BlockAverage) -> HsCube:
    """Downscale every band by averaging over disjoint block x block windows."""
    if cube.rows != op.in_rows or cube.cols != op.in_cols:
        raise ValueError(
            f"cube is {cube.rows}x{cube.cols}, operator expects {op.in_rows}x{op.in_cols}"
        )
    b = op.block
    blocked = cube.data.reshape(cube.bands, op.out_rows, b, op.out_cols, b)
    return HsCube(blocked.mean(axis=(2, 4)))


def block_avg_adjoint(cube: HsCube, op: BlockAverage) -> HsCube:
    """Adjoint of block averaging: spread each low-res value /block**2 over its window."""
    if cube.rows != op.out_rows or cube.cols != op.out_cols:
        raise ValueError(
            f"cube is {cube.rows}x{cube.cols}, adjoint expects {op.out_rows}x{op.out_cols}"
        )
    b = op.block
    spread = np.repeat(np.repeat(cube.data, b, axis=1), b, axis=2)
    return HsCube(spread / (b * b))


def csr_apply(cube: HsCube, r: SpectralMatrix) -> HsCube:
    """Mix spectral bands into output channels: out(i,j,c) = sum_s X(i,j,s) R(s,c)."""
    if cube.bands != r.in_bands:
        raise ValueError(f"cube has {cube.bands} bands, spectral matrix expects {r.in_bands}")
    mixed = np.tensordot(r.entries.T, cube.data, axes=([1], [0]))
    return HsCube(mixed)


def csr_adjoint(cube: HsCube, r: SpectralMatrix) -> HsCube:
    """Adjoint of the spectral mixer: out(i,j,s) = sum_c Y(i,j,c) R(s,c)."""
    if cube.bands != r.out_bands:
        raise ValueError(f"cube has {cube.bands} channels, adjoint expects {r.out_bands}")
    spread = np.tensordot(r.entries, cube.data, axes=([1], [0]))
    return HsCube(spread)


@dataclass(frozen=True)
class TvDiff:
    """First-order difference operator with periodic boundaries.

    Output stacks all vertical differences (row-major) above all horizontal
    differences, length 2 * rows * cols.
    """

    rows: int
    cols: int

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"grid dimensions must be positive, got {self.rows}x{self.cols}")

    @property
    def n_pixels(self) -> int:
        return self.rows * self.cols

    @property
    def n_out(self) -> int:
        return 2 * self.rows * self.cols


def tv_apply(plane: np.ndarray, op: TvDiff) -> FloatArray:
    """Stacked periodic differences of a plane: vertical block then horizontal block."""
    x = np.asarray(plane, dtype=np.float64)
    if x.shape != (op.rows, op.cols):
        raise ValueError(f"plane is {x.shape}, operator expects {(op.rows, op.cols)}")
    vert = np.roll(x, -1, axis=0) - x
    horz = np.roll(x, -1, axis=1) - x
    return np.concatenate([vert.ravel(), horz.ravel()])


def tv_adjoint(grad: np.ndarray, op: TvDiff) -> FloatArray:
    """Adjoint of tv_apply (negative discrete divergence, periodic)."""
    g = np.asarray(grad, dtype=np.float64)
    if g.shape != (op.n_out,):
        raise ValueError(f"gradient has length {g.size}, expected {op.n_out}")
    n = op.n_pixels
    gv = g[:n].reshape(op.rows, op.cols)
    gh = g[n:].reshape(op.rows, op.cols)
    return (np.roll(gv, 1, axis=0) - gv) + (np.roll(gh, 1, axis=1) - gh)


def tv_norm(cube: HsCube) -> float:
    """Anisotropic total variation: sum over bands of the l1 norm of the stacked differences."""
    vert = np.roll(cube.data, -1, axis=1) - cube.data
    horz = np.roll(cube.data, -1, axis=2) - cube.data
    return float(np.abs(vert).sum() + np.abs(horz).sum())
