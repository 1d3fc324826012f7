"""File formats: HSC1 cube container, CSR text matrices, P5 previews,
metrics tables.

HSC1 layout: 4 ASCII magic bytes "HSC1", then rows, cols, bands as 32-bit
unsigned little-endian integers, then rows*cols*bands IEEE-754 32-bit
little-endian values, band-major and row-major within each band.
"""

from __future__ import annotations

import struct
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import HsCube, SpectralMatrix, band_view, clamp01
from .metrics import MetricsRecord

_MAGIC = b"HSC1"
_HEADER = struct.Struct("<III")


class HscFormatError(ValueError):
    """Malformed HSC1 file."""


class HscBadMagicError(HscFormatError):
    """File does not start with the HSC1 magic bytes."""


class HscTruncatedError(HscFormatError):
    """File ends before the declared payload is complete."""


class HscZeroDimensionError(HscFormatError):
    """Header declares a zero-sized cube."""


def write_hsc(cube: HsCube, path: str | Path) -> None:
    payload = cube.data.astype("<f4")
    if not np.isfinite(payload).all():
        raise ValueError(f"cube values exceed float32 range, cannot write {path}")
    with open(path, "wb") as f:
        f.write(_MAGIC)
        f.write(_HEADER.pack(cube.rows, cube.cols, cube.bands))
        f.write(payload.tobytes())


def read_hsc(path: str | Path) -> HsCube:
    with open(path, "rb") as f:
        raw = f.read()
    if len(raw) < len(_MAGIC) or raw[: len(_MAGIC)] != _MAGIC:
        raise HscBadMagicError(
            f"{path}: expected magic {_MAGIC!r}, got {raw[:len(_MAGIC)]!r}"
        )
    if len(raw) < len(_MAGIC) + _HEADER.size:
        raise HscTruncatedError(f"{path}: header truncated at {len(raw)} bytes")
    rows, cols, bands = _HEADER.unpack_from(raw, len(_MAGIC))
    if rows == 0 or cols == 0 or bands == 0:
        raise HscZeroDimensionError(
            f"{path}: zero dimension in header ({rows}x{cols}x{bands})"
        )
    start = len(_MAGIC) + _HEADER.size
    expected = rows * cols * bands * 4
    body = raw[start:]
    if len(body) < expected:
        raise HscTruncatedError(
            f"{path}: payload has {len(body)} bytes, expected {expected}"
        )
    if len(body) > expected:
        raise HscFormatError(
            f"{path}: {len(body) - expected} trailing bytes after payload"
        )
    values = np.frombuffer(body, dtype="<f4").astype(np.float64)
    return HsCube(values.reshape(bands, rows, cols))


def read_csr(path: str | Path) -> SpectralMatrix:
    """Parse a comma-separated spectral response matrix: one text line per
    source band, one decimal value per output channel."""
    text = Path(path).read_text()
    rows: list[list[float]] = []
    width: int | None = None
    for line_no, line in enumerate(text.splitlines(), start=1):
        if line.strip() == "" and line_no > 1:
            continue
        tokens = line.split(",")
        if width is None:
            width = len(tokens)
        elif len(tokens) != width:
            raise ValueError(
                f"{path}: line {line_no} has {len(tokens)} values, expected {width}"
            )
        row = []
        for col_no, token in enumerate(tokens, start=1):
            try:
                row.append(float(token))
            except ValueError:
                raise ValueError(
                    f"{path}: non-numeric value {token.strip()!r} "
                    f"at line {line_no}, column {col_no}"
                ) from None
        rows.append(row)
    if not rows:
        raise ValueError(f"{path}: empty spectral response file")
    return SpectralMatrix(np.asarray(rows, dtype=np.float64))


def write_csr(matrix: SpectralMatrix, path: str | Path) -> None:
    """Inverse of read_csr; values use shortest round-tripping decimals."""
    lines = [",".join(repr(v) for v in row) for row in matrix.entries.tolist()]
    with open(path, "w", newline="\n") as f:
        f.write("\n".join(lines) + "\n")


def write_band_preview(cube: HsCube, s: int, path: str | Path) -> None:
    """8-bit P5 graymap of one band; values are clamped to [0, 1] and
    rounded half away from zero."""
    plane = band_view(clamp01(cube), s)
    pixels = np.floor(plane * 255.0 + 0.5).astype(np.uint8)
    with open(path, "wb") as f:
        f.write(f"P5\n{cube.cols} {cube.rows}\n255\n".encode("ascii"))
        f.write(pixels.tobytes())


METRICS_HEADER = "method,psnr,ssim,sam,ergas,rmse"


def metrics_row(name: str, rec: MetricsRecord) -> str:
    return (f"{name},{rec.psnr:.3f},{rec.ssim:.3f},{rec.sam:.3f},"
            f"{rec.ergas:.3f},{rec.rmse:.3f}")


def write_metrics_table(records: Sequence[tuple[str, MetricsRecord]],
                        path: str | Path) -> None:
    """Comma-separated table, one row per evaluated method, 3 decimals."""
    lines = [METRICS_HEADER] + [metrics_row(name, rec) for name, rec in records]
    with open(path, "w", newline="\n") as f:
        f.write("\n".join(lines) + "\n")
