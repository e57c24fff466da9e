"""Binary masks and rectangular morphological dilation.

Dilation is the exact max filter

    out(x, y) = max over (m, n) in S of in(x + m, y + n)

with zero padding outside the raster. Rectangular windows are separable, so
the implementation runs a horizontal max pass followed by a vertical one;
tests check it against a direct window-enumeration oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..geometry import freeze


@dataclass(frozen=True)
class BinaryMask:
    data: np.ndarray  # (H, W) uint8, values in {0, 1}

    def __post_init__(self):
        d = np.asarray(self.data)
        if d.ndim != 2:
            raise ValueError("mask must be 2-D")
        d = d.astype(np.uint8)
        if d.size and d.max() > 1:
            raise ValueError("mask values must be 0 or 1")
        object.__setattr__(self, "data", freeze(d))

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    def count(self) -> int:
        return int(self.data.sum())


@dataclass(frozen=True)
class StructuringElement:
    """Rectangular sliding window of offsets (m, n) with |m| <= half_width,
    |n| <= half_height; always odd-sized and containing the origin."""

    half_width: int
    half_height: int

    def __post_init__(self):
        if self.half_width < 0 or self.half_height < 0:
            raise ValueError("element half sizes must be >= 0")

    @classmethod
    def from_size(cls, width: int, height: int) -> "StructuringElement":
        if width < 1 or height < 1 or width % 2 == 0 or height % 2 == 0:
            raise ValueError("element sizes must be odd and >= 1")
        return cls(width // 2, height // 2)

    @property
    def size(self) -> tuple:
        return (2 * self.half_width + 1, 2 * self.half_height + 1)

    def offsets(self):
        for n in range(-self.half_height, self.half_height + 1):
            for m in range(-self.half_width, self.half_width + 1):
                yield (m, n)

    def minkowski_sum(self, other: "StructuringElement") -> "StructuringElement":
        return StructuringElement(
            self.half_width + other.half_width, self.half_height + other.half_height
        )


DEFAULT_ELEMENT = StructuringElement(5, 5)  # 11x11 at 640x480


def element_for_resolution(width: int, height: int) -> StructuringElement:
    """Default 11x11 at 640x480, scaled proportionally with the raster."""
    half = max(1, round(5 * width / 640))
    return StructuringElement(half, half)


def _shifted(arr: np.ndarray, dy: int, dx: int) -> np.ndarray:
    """out[y, x] = arr[y + dy, x + dx], zero outside."""
    h, w = arr.shape
    out = np.zeros_like(arr)
    ys = slice(max(0, -dy), min(h, h - dy))
    xs = slice(max(0, -dx), min(w, w - dx))
    src_ys = slice(max(0, dy), min(h, h + dy))
    src_xs = slice(max(0, dx), min(w, w + dx))
    out[ys, xs] = arr[src_ys, src_xs]
    return out


def dilate(mask: BinaryMask, element: StructuringElement) -> BinaryMask:
    rows = np.zeros_like(mask.data)
    for m in range(-element.half_width, element.half_width + 1):
        np.maximum(rows, _shifted(mask.data, 0, m), out=rows)
    out = np.zeros_like(rows)
    for n in range(-element.half_height, element.half_height + 1):
        np.maximum(out, _shifted(rows, n, 0), out=out)
    return BinaryMask(out)


def binarize(raster) -> BinaryMask:
    """Any raster to {0, 1}: value > 0 maps to 1."""
    arr = np.asarray(raster.data if isinstance(raster, BinaryMask) else raster)
    return BinaryMask((arr > 0).astype(np.uint8))
