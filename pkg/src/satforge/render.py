"""Render a dense encoding as a 3-color raster (binary PPM, P6).

PPM was picked over richer formats because it is dependency-free and
bit-exact: the file is a 14-ish byte header plus the raw RGB buffer.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import DenseEncoding

RGB = tuple[int, int, int]


@dataclass(frozen=True, slots=True)
class Palette:
    """Distinct RGB colors for the three cell values."""

    negative: RGB = (220, 50, 47)
    absent: RGB = (0, 0, 0)
    positive: RGB = (60, 180, 75)

    def __post_init__(self) -> None:
        colors = {self.negative, self.absent, self.positive}
        if len(colors) != 3:
            raise ValueError("palette colors must be pairwise distinct")
        for color in colors:
            if len(color) != 3 or not all(0 <= c <= 255 for c in color):
                raise ValueError(f"not an RGB triple: {color}")


def render_image(enc: DenseEncoding, palette: Palette | None = None, scale: int = 1) -> np.ndarray:
    """Map each cell to its palette color; returns (rows*scale, cols*scale, 3) uint8."""
    if palette is None:
        palette = Palette()
    if scale < 1:
        raise ValueError(f"scale must be >= 1, got {scale}")
    lut = np.zeros((3, 3), dtype=np.uint8)
    lut[0] = palette.negative
    lut[1] = palette.absent
    lut[2] = palette.positive
    pixels = lut[enc.cells.astype(np.intp) + 1]
    if scale > 1:
        pixels = pixels.repeat(scale, axis=0).repeat(scale, axis=1)
    return pixels


def write_ppm(pixels: np.ndarray, path: str | Path) -> None:
    """Write an RGB buffer as binary PPM (P6, maxval 255)."""
    pixels = np.asarray(pixels, dtype=np.uint8)
    if pixels.ndim != 3 or pixels.shape[2] != 3:
        raise ValueError(f"expected (h, w, 3) buffer, got shape {pixels.shape}")
    height, width = pixels.shape[:2]
    header = f"P6\n{width} {height}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(pixels.tobytes())


def read_ppm(path: str | Path) -> np.ndarray:
    """Read back a P6 file written by :func:`write_ppm` (no comment support)."""
    raw = Path(path).read_bytes()
    parts = raw.split(b"\n", 3)
    if len(parts) != 4 or parts[0] != b"P6" or parts[2] != b"255":
        raise ValueError(f"not a write_ppm-style P6 file: {path}")
    width, height = (int(x) for x in parts[1].split())
    data = np.frombuffer(parts[3], dtype=np.uint8, count=height * width * 3)
    return data.reshape(height, width, 3).copy()
