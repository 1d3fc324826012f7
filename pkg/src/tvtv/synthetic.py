"""Seeded generators so the whole pipeline runs with zero external data.

Cubes are piecewise constant: random axis-aligned rectangles partition the
plane into regions and every region gets its own smooth spectrum.  Response
matrices are jittered Gaussian bumps over the band axis, one per output
channel, normalized to unit column sum.
"""

from __future__ import annotations

import numpy as np

from .core import HsCube, SpectralMatrix

_CONTROL_POINTS = 4


def synthetic_cube(rows: int = 64, cols: int = 64, bands: int = 8,
                   rects: int = 6, seed: int = 0) -> HsCube:
    """Piecewise-constant cube in [0, 1] with ``rects`` overlaid rectangles."""
    if rows < 1 or cols < 1 or bands < 1 or rects < 0:
        raise ValueError("cube dimensions must be positive and rects nonnegative")
    rng = np.random.default_rng(seed)
    labels = np.zeros((rows, cols), dtype=np.intp)
    for region in range(1, rects + 1):
        r0, r1 = np.sort(rng.integers(0, rows, size=2))
        c0, c1 = np.sort(rng.integers(0, cols, size=2))
        labels[r0:r1 + 1, c0:c1 + 1] = region

    # One smooth spectrum per region: a few control values joined linearly.
    knots = np.linspace(0.0, max(bands - 1, 1), _CONTROL_POINTS)
    values = rng.uniform(0.1, 0.9, size=(rects + 1, _CONTROL_POINTS))
    spectra = np.stack([
        np.interp(np.arange(bands), knots, values[region])
        for region in range(rects + 1)
    ])
    return HsCube(spectra[labels].transpose(2, 0, 1).copy())


def synthetic_response(bands: int, channels: int, seed: int = 0) -> SpectralMatrix:
    """Random full-rank response: one jittered Gaussian bump per channel."""
    if channels < 1 or channels > bands:
        raise ValueError(
            f"channels must be in 1..bands, got {channels} for {bands} bands"
        )
    rng = np.random.default_rng(seed)
    spacing = bands / channels
    centers = (np.arange(channels) + 0.5) * spacing - 0.5
    centers = centers + rng.uniform(-0.25, 0.25, size=channels) * spacing
    sigma = max(spacing / 2.0, 0.5)
    band_axis = np.arange(bands)[:, None]
    entries = np.exp(-((band_axis - centers[None, :]) ** 2) / (2.0 * sigma**2))
    return SpectralMatrix(entries / entries.sum(axis=0, keepdims=True))


def add_noise(cube: HsCube, sigma: float, seed: int = 0) -> HsCube:
    """Additive seeded Gaussian noise; the result is NOT re-clamped."""
    if sigma < 0:
        raise ValueError(f"noise level must be nonnegative, got {sigma}")
    if sigma == 0:
        return cube
    rng = np.random.default_rng(seed)
    return HsCube(cube.data + rng.normal(0.0, sigma, size=cube.data.shape))
