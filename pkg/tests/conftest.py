"""Shared fixtures: the seeded synthetic pipeline every suite module reuses."""

from __future__ import annotations

from types import SimpleNamespace

import numpy as np
import pytest

import tvtv
from tvtv.operators import BlockAverage, block_avg_apply, csr_apply


@pytest.fixture(scope="session")
def pipeline64():
    """64x64x8 piecewise-constant ground truth, 4x downscaling, 2-channel
    response, plus the fused starting point and its noisy variant."""
    gt = tvtv.synthetic_cube(rows=64, cols=64, bands=8, rects=6, seed=0)
    response = tvtv.synthetic_response(bands=8, channels=2, seed=0)
    down = BlockAverage(block=4, in_rows=64, in_cols=64)
    low_res = block_avg_apply(gt, down)
    guide = csr_apply(gt, response)
    base = tvtv.naive_fuse(low_res, guide, response, 4)
    base_noisy = tvtv.add_noise(base, 0.02, seed=1)
    return SimpleNamespace(gt=gt, response=response, down=down, block=4,
                           low_res=low_res, guide=guide, base=base,
                           base_noisy=base_noisy)


@pytest.fixture(scope="session")
def small_consistent():
    """4x4x3 cube with 2x downscaling and a 2-channel response, measurements
    generated from the same ground truth so the two constraint sets meet."""
    rng = np.random.default_rng(5)
    gt = tvtv.HsCube(rng.uniform(0.05, 0.95, (3, 4, 4)))
    entries = rng.uniform(0.1, 1.0, (3, 2))
    response = tvtv.SpectralMatrix(entries / entries.sum(axis=0))
    down = BlockAverage(block=2, in_rows=4, in_cols=4)
    low_res = block_avg_apply(gt, down)
    guide = csr_apply(gt, response)
    point = tvtv.HsCube(rng.uniform(0.0, 1.0, (3, 4, 4)))
    return SimpleNamespace(gt=gt, response=response, down=down, block=2,
                           low_res=low_res, guide=guide, point=point)


@pytest.fixture(scope="session")
def small_inconsistent(small_consistent):
    """Same geometry but the guide is perturbed, so no cube satisfies both
    measurement sets at once."""
    bumped = tvtv.HsCube(small_consistent.guide.data + 0.1)
    return SimpleNamespace(**{**vars(small_consistent), "guide": bumped})
