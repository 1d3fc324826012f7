"""Quality measures for reconstructed cubes against a reference.

RMSE and PSNR are reported on the 0-255 scale even though cubes live in
[0, 1]; SSIM is single-scale with the standard 11x11 Gaussian window and
unit dynamic range, evaluated on fully interior windows only; SAM averages
per-pixel spectral angles in degrees; ERGAS is the scale-ratio-weighted
band-relative error aggregate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import FloatArray, HsCube

PSNR_CAP_DB = 100.0

_SSIM_WINDOW = 11
_SSIM_SIGMA = 1.5
_SSIM_K1 = 0.01
_SSIM_K2 = 0.03


@dataclass(frozen=True)
class MetricsRecord:
    """One evaluated method's scores."""

    psnr: float
    ssim: float
    sam: float
    ergas: float
    rmse: float

    def __post_init__(self):
        for name, value in vars(self).items():
            if not math.isfinite(value):
                raise ValueError(f"metric {name} is not finite: {value}")


def _check_dims(est: HsCube, ref: HsCube) -> None:
    if est.data.shape != ref.data.shape:
        raise ValueError(
            f"cube shapes differ: {est.data.shape} vs {ref.data.shape}"
        )


def rmse(est: HsCube, ref: HsCube) -> float:
    """Root-mean-square error over all entries, 0-255 scale."""
    _check_dims(est, ref)
    diff = 255.0 * (est.data - ref.data)
    return float(np.sqrt(np.mean(diff * diff)))


def psnr(est: HsCube, ref: HsCube) -> float:
    """Band-averaged peak signal-to-noise ratio in dB, capped at 100 per band."""
    _check_dims(est, ref)
    diff = 255.0 * (est.data - ref.data)
    mse = np.mean(diff * diff, axis=(1, 2))
    out = np.full(est.bands, PSNR_CAP_DB)
    hit = mse > 0
    out[hit] = np.minimum(PSNR_CAP_DB, 10.0 * np.log10(255.0**2 / mse[hit]))
    return float(np.mean(out))


def _gaussian_window(size: int, sigma: float) -> FloatArray:
    half = (size - 1) / 2.0
    offsets = np.arange(size) - half
    g = np.exp(-(offsets**2) / (2.0 * sigma**2))
    return g / g.sum()


def _filter_valid(plane: np.ndarray, taps: FloatArray) -> FloatArray:
    """Separable correlation keeping only fully covered output pixels."""
    k = taps.size
    rows = plane.shape[0] - k + 1
    mid = np.zeros((rows, plane.shape[1]))
    for i in range(k):
        mid += taps[i] * plane[i:i + rows, :]
    cols = plane.shape[1] - k + 1
    out = np.zeros((rows, cols))
    for j in range(k):
        out += taps[j] * mid[:, j:j + cols]
    return out


def _ssim_plane(est: np.ndarray, ref: np.ndarray, taps: FloatArray) -> float:
    c1 = (_SSIM_K1 * 1.0) ** 2
    c2 = (_SSIM_K2 * 1.0) ** 2
    mu1 = _filter_valid(est, taps)
    mu2 = _filter_valid(ref, taps)
    var1 = _filter_valid(est * est, taps) - mu1 * mu1
    var2 = _filter_valid(ref * ref, taps) - mu2 * mu2
    cov = _filter_valid(est * ref, taps) - mu1 * mu2
    num = (2.0 * mu1 * mu2 + c1) * (2.0 * cov + c2)
    den = (mu1 * mu1 + mu2 * mu2 + c1) * (var1 + var2 + c2)
    return float(np.mean(num / den))


def ssim(est: HsCube, ref: HsCube) -> float:
    """Band-averaged structural similarity (11x11 Gaussian window, sigma 1.5,
    unit dynamic range, interior windows only)."""
    _check_dims(est, ref)
    if est.rows < _SSIM_WINDOW or est.cols < _SSIM_WINDOW:
        raise ValueError(
            f"bands must be at least {_SSIM_WINDOW}x{_SSIM_WINDOW} for SSIM, "
            f"got {est.rows}x{est.cols}"
        )
    taps = _gaussian_window(_SSIM_WINDOW, _SSIM_SIGMA)
    scores = [_ssim_plane(est.data[s], ref.data[s], taps)
              for s in range(est.bands)]
    return float(np.mean(scores))


def sam(est: HsCube, ref: HsCube) -> float:
    """Mean spectral angle in degrees; pixels with a near-zero spectrum in
    either cube are skipped."""
    _check_dims(est, ref)
    dot = np.sum(est.data * ref.data, axis=0)
    n1 = np.sqrt(np.sum(est.data * est.data, axis=0))
    n2 = np.sqrt(np.sum(ref.data * ref.data, axis=0))
    keep = (n1 >= 1e-12) & (n2 >= 1e-12)
    if not np.any(keep):
        raise ValueError("all pixels have near-zero spectra; spectral angle undefined")
    cosang = np.clip(dot[keep] / (n1[keep] * n2[keep]), -1.0, 1.0)
    return float(np.mean(np.degrees(np.arccos(cosang))))


def ergas(est: HsCube, ref: HsCube, scale_ratio: float = 32.0) -> float:
    """Relative dimensionless global error: 100/d * sqrt(mean_s MSE_s/mean_s²)."""
    _check_dims(est, ref)
    if scale_ratio <= 0:
        raise ValueError(f"scale ratio must be positive, got {scale_ratio}")
    means = np.mean(ref.data, axis=(1, 2))
    zero = np.nonzero(means == 0.0)[0]
    if zero.size:
        raise ValueError(f"reference band {zero[0]} has zero mean; ERGAS undefined")
    mse = np.mean((est.data - ref.data) ** 2, axis=(1, 2))
    return float(100.0 / scale_ratio * np.sqrt(np.mean(mse / means**2)))


def evaluate(est: HsCube, ref: HsCube, scale_ratio: float = 32.0) -> MetricsRecord:
    """All five measures in one record."""
    return MetricsRecord(
        psnr=psnr(est, ref),
        ssim=ssim(est, ref),
        sam=sam(est, ref),
        ergas=ergas(est, ref, scale_ratio),
        rmse=rmse(est, ref),
    )
