"""Dense hyperspectral cube container and shared configuration types.

A cube stores ``bands`` planes of ``rows x cols`` pixels. Memory layout is
band-major (plane 0 first, row-major within a plane), so per-band solver
passes operate on contiguous memory.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

FloatArray = NDArray[np.float64]


@dataclass(frozen=True)
class HsCube:
    """Hyperspectral image cube, shape (bands, rows, cols), float64."""

    data: FloatArray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim != 3:
            raise ValueError(f"cube data must be 3-D (bands, rows, cols), got ndim={arr.ndim}")
        if min(arr.shape) < 1:
            raise ValueError(f"cube dimensions must be positive, got shape={arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("cube data contains non-finite entries")
        object.__setattr__(self, "data", arr)

    @property
    def bands(self) -> int:
        return self.data.shape[0]

    @property
    def rows(self) -> int:
        return self.data.shape[1]

    @property
    def cols(self) -> int:
        return self.data.shape[2]

    @property
    def shape(self) -> tuple[int, int, int]:
        """(rows, cols, bands)."""
        return (self.rows, self.cols, self.bands)

    def flat(self) -> FloatArray:
        """Band-major flattened copy (band 0 row-major, then band 1, ...)."""
        return self.data.ravel().copy()

    @classmethod
    def from_flat(cls, rows: int, cols: int, bands: int, values) -> "HsCube":
        """Build a cube from a band-major flat array."""
        arr = np.asarray(values, dtype=np.float64)
        if arr.size != rows * cols * bands:
            raise ValueError(
                f"flat data has {arr.size} values, expected {rows * cols * bands} "
                f"for a {rows}x{cols}x{bands} cube"
            )
        return cls(arr.reshape(bands, rows, cols))


def band_view(cube: HsCube, s: int) -> FloatArray:
    """Plane of band ``s`` as a (rows, cols) view; writes are visible in the cube."""
    if not 0 <= s < cube.bands:
        raise IndexError(f"band index {s} out of range for cube with {cube.bands} bands")
    return cube.data[s]


def assemble(planes: Sequence[np.ndarray]) -> HsCube:
    """Stack 2-D band planes (band 0 first) into a cube."""
    if len(planes) == 0:
        raise ValueError("cannot assemble a cube from an empty list of planes")
    first = np.asarray(planes[0], dtype=np.float64)
    if first.ndim != 2:
        raise ValueError(f"planes must be 2-D, got ndim={first.ndim}")
    for i, p in enumerate(planes[1:], start=1):
        if np.asarray(p).shape != first.shape:
            raise ValueError(
                f"plane {i} has shape {np.asarray(p).shape}, expected {first.shape}"
            )
    return HsCube(np.stack([np.asarray(p, dtype=np.float64) for p in planes], axis=0))


def clamp01(cube: HsCube) -> HsCube:
    """Clip every entry into [0, 1]. Display sanitation only, never applied between solver iterations."""
    return HsCube(np.clip(cube.data, 0.0, 1.0))


@dataclass(frozen=True)
class SpectralMatrix:
    """Spectral response matrix mapping s0 source bands to s output channels.

    Row index is the source band, column index the output channel. Must have
    full column rank (smallest singular value > 1e-12).
    """

    entries: FloatArray

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError(f"spectral matrix must be 2-D, got ndim={arr.ndim}")
        s0, s = arr.shape
        if s0 < 1 or s < 1:
            raise ValueError(f"spectral matrix dimensions must be positive, got {arr.shape}")
        if s > s0:
            raise ValueError(f"output channels ({s}) must not exceed source bands ({s0})")
        if not np.all(np.isfinite(arr)):
            raise ValueError("spectral matrix contains non-finite entries")
        smin = float(np.linalg.svd(arr, compute_uv=False)[-1])
        if smin <= 1e-12:
            raise ValueError(
                f"spectral matrix is rank deficient: smallest singular value {smin:.3e} <= 1e-12"
            )
        object.__setattr__(self, "entries", arr)

    @property
    def in_bands(self) -> int:
        return self.entries.shape[0]

    @property
    def out_bands(self) -> int:
        return self.entries.shape[1]


@dataclass(frozen=True)
class SolverConfig:
    """Solver parameters. Defaults: beta=1, rho=0.2, tol=0.001, 120 iterations, 32x32 blocks."""

    beta: float = 1.0            # trade-off weight on the second TV term
    rho: float = 0.2             # augmented Lagrangian parameter, > 0
    max_iters: int = 120
    residual_tol: float = 0.001  # RMS residual threshold, primal or dual
    block: int = 32              # downscaling factor
    parallel_bands: bool = False
    projection_mode: str = "auto"   # auto | exact | dykstra
    dykstra_iters: int = 200
    dykstra_tol: float = 1e-9

    def __post_init__(self):
        if self.beta < 0:
            raise ValueError(f"beta must be nonnegative, got {self.beta}")
        if self.rho <= 0:
            raise ValueError(f"rho must be positive, got {self.rho}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be positive, got {self.max_iters}")
        if self.residual_tol <= 0:
            raise ValueError(f"residual_tol must be positive, got {self.residual_tol}")
        if self.block < 1:
            raise ValueError(f"block must be positive, got {self.block}")
        if self.projection_mode not in ("auto", "exact", "dykstra"):
            raise ValueError(f"projection_mode must be auto, exact or dykstra, got {self.projection_mode!r}")
        if self.dykstra_iters < 1:
            raise ValueError(f"dykstra_iters must be positive, got {self.dykstra_iters}")
        if self.dykstra_tol <= 0:
            raise ValueError(f"dykstra_tol must be positive, got {self.dykstra_tol}")
