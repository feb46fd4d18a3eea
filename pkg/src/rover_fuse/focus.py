"""Focus estimate of a grayscale image from directional gradient quantiles."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

INV_SQRT2 = 1.0 / math.sqrt(2.0)


class DegenerateImage(ValueError):
    pass


class UnsupportedFormat(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GrayImage:
    """8-bit grayscale image stored as a ``(height, width)`` uint8 array."""

    pixels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.pixels)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError(f"expected a non-empty 2-D pixel array, got shape {arr.shape}")
        if arr.dtype != np.uint8:
            if np.any(arr < 0) or np.any(arr > 255) or np.any(arr != np.round(arr)):
                raise ValueError("pixel intensities must be integers in [0, 255]")
            arr = arr.astype(np.uint8)
        arr = np.array(arr, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @classmethod
    def from_rows(cls, rows) -> "GrayImage":
        return cls(np.array(rows))

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return np.array_equal(self.pixels, other.pixels)

    __hash__ = None


def gradients(img: GrayImage):
    """Absolute vertical, horizontal and both diagonal differences.

    Returns four flat float arrays ``(V, H, D1, D2)``; diagonals are scaled by
    1/sqrt(2).
    """
    if img.height < 2 or img.width < 2:
        raise DegenerateImage(f"focus needs at least a 2x2 image, got {img.width}x{img.height}")
    I = img.pixels.astype(np.float64)
    v = np.abs(I[1:, :] - I[:-1, :])
    h = np.abs(I[:, 1:] - I[:, :-1])
    d1 = INV_SQRT2 * np.abs(I[1:, 1:] - I[:-1, :-1])
    d2 = INV_SQRT2 * np.abs(I[:-1, 1:] - I[1:, :-1])
    return v.ravel(), h.ravel(), d1.ravel(), d2.ravel()


def quantile095(values) -> float:
    """Nearest-rank 0.95 quantile: the ceil(0.95 n)-th smallest value."""
    arr = np.asarray(values, dtype=np.float64).ravel()
    n = arr.size
    if n == 0:
        raise ValueError("quantile of an empty list")
    # integer arithmetic keeps ceil exact: ceil(95 n / 100)
    rank = -(-95 * n // 100)
    return float(np.partition(arr, rank - 1)[rank - 1])


def focus_estimate(img: GrayImage) -> float:
    return min(quantile095(g) for g in gradients(img))


_PGM_TOKEN = re.compile(rb"(#[^\n\r]*[\n\r]?)|(\S+)")


def parse_pgm(data: bytes) -> GrayImage:
    """Decode a binary (P5) PGM with maxval 255. Header comments are skipped."""
    fields = []
    pos = 0
    while len(fields) < 4:
        m = _PGM_TOKEN.search(data, pos)
        if m is None:
            raise UnsupportedFormat("truncated PGM header")
        pos = m.end()
        if m.group(2) is not None:
            fields.append(m.group(2))
    if fields[0] != b"P5":
        raise UnsupportedFormat(f"only binary P5 PGM is supported, got magic {fields[0]!r}")
    try:
        width, height, maxval = (int(f) for f in fields[1:4])
    except ValueError as exc:
        raise UnsupportedFormat("malformed PGM header") from exc
    if maxval != 255:
        raise UnsupportedFormat(f"only maxval 255 is supported, got {maxval}")
    if width <= 0 or height <= 0:
        raise UnsupportedFormat("PGM dimensions must be positive")
    # exactly one whitespace byte separates the header from the raster
    pos += 1
    raster = data[pos : pos + width * height]
    if len(raster) != width * height:
        raise UnsupportedFormat("PGM raster is truncated")
    return GrayImage(np.frombuffer(raster, dtype=np.uint8).reshape(height, width))


def read_pgm(path) -> GrayImage:
    return parse_pgm(Path(path).read_bytes())


def encode_pgm(img: GrayImage) -> bytes:
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + img.pixels.tobytes()


def write_pgm(path, img: GrayImage) -> None:
    Path(path).write_bytes(encode_pgm(img))
