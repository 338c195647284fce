"""Image to symbol-string encoding.

RGB pixels are resampled to a square grid, converted to HSV, uniformly
quantized into an 8-bit color code and tagged with one extra bit marking rough
vertical transitions. The grid is then read row by row.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image


@dataclass(frozen=True)
class PipelineConfig:
    hue_bins: int = 16
    sat_bins: int = 4
    val_bins: int = 4
    texture_threshold: float = 0.4
    target_side: int = 64

    def __post_init__(self):
        for name in ("hue_bins", "sat_bins", "val_bins"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.color_levels > 256:
            raise ValueError(
                f"hue_bins * sat_bins * val_bins must be <= 256, got {self.color_levels}"
            )
        if not 0.0 <= self.texture_threshold <= 1.0:
            raise ValueError("texture_threshold must lie in [0, 1]")
        if self.target_side < 2:
            raise ValueError("target_side must be >= 2")

    @property
    def color_levels(self) -> int:
        return self.hue_bins * self.sat_bins * self.val_bins


@dataclass(frozen=True, eq=False)
class SymbolString:
    symbols: np.ndarray
    source_id: str = ""

    def __len__(self) -> int:
        return len(self.symbols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymbolString):
            return NotImplemented
        return self.source_id == other.source_id and np.array_equal(self.symbols, other.symbols)

    __hash__ = None


def rgb_to_hsv(rgb) -> np.ndarray:
    """Hexcone HSV for 0-255 RGB values.

    Accepts a single triple or any array with a trailing axis of 3. Hue is in
    [0, 1) and is 0 for achromatic pixels.
    """
    rgb = np.asarray(rgb, dtype=np.float64) / 255.0
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    mx = rgb.max(axis=-1)
    mn = rgb.min(axis=-1)
    delta = mx - mn
    chroma = delta > 0
    safe = np.where(chroma, delta, 1.0)

    rc = (g - b) / safe
    gc = 2.0 + (b - r) / safe
    bc = 4.0 + (r - g) / safe
    h = np.where(mx == r, rc, np.where(mx == g, gc, bc))
    h = np.where(chroma, (h / 6.0) % 1.0, 0.0)
    # (x % 1.0) can round to exactly 1.0 for tiny negative x
    h = np.where(h >= 1.0, 0.0, h)
    s = np.where(mx > 0, delta / np.where(mx > 0, mx, 1.0), 0.0)
    return np.stack([h, s, mx], axis=-1)


def quantize(hsv, cfg: PipelineConfig = PipelineConfig()) -> np.ndarray:
    """Uniform color code in ``[0, cfg.color_levels)``."""
    hsv = np.asarray(hsv, dtype=np.float64)
    bins = np.array([cfg.hue_bins, cfg.sat_bins, cfg.val_bins])
    q = np.minimum(np.floor(hsv * bins), bins - 1).astype(np.int64)
    q = np.maximum(q, 0)
    return q[..., 0] * (cfg.sat_bins * cfg.val_bins) + q[..., 1] * cfg.val_bins + q[..., 2]


def hsv_distance(p1, p2) -> np.ndarray:
    """Plain Euclidean distance between HSV triples; hue is not treated as circular."""
    d = np.asarray(p1, dtype=np.float64) - np.asarray(p2, dtype=np.float64)
    return np.sqrt((d * d).sum(axis=-1))


def texture_bits(hsv_img, t: float) -> np.ndarray:
    """Per-pixel vertical roughness bit for an (H, W, 3) HSV image.

    A pixel is rough when either its upper or lower neighbour is farther than
    ``t``. Border rows only test the neighbour that exists.
    """
    hsv_img = np.asarray(hsv_img, dtype=np.float64)
    exceeds = hsv_distance(hsv_img[1:], hsv_img[:-1]) > t
    bits = np.zeros(hsv_img.shape[:2], dtype=np.uint8)
    bits[:-1] |= exceeds
    bits[1:] |= exceeds
    return bits


def texture_bit(hsv_img, i: int, j: int, t: float) -> int:
    hsv_img = np.asarray(hsv_img, dtype=np.float64)
    rows = hsv_img.shape[0]
    if not (0 <= i < rows and 0 <= j < hsv_img.shape[1]):
        raise IndexError(f"pixel ({i}, {j}) outside image")
    p = hsv_img[i, j]
    for k in (i - 1, i + 1):
        if 0 <= k < rows and hsv_distance(p, hsv_img[k, j]) > t:
            return 1
    return 0


def load_image(path) -> np.ndarray:
    """Decode an image file to an (H, W, 3) uint8 RGB array."""
    with Image.open(Path(path)) as im:
        return np.asarray(im.convert("RGB"))


def resample(rgb: np.ndarray, side: int) -> np.ndarray:
    """Area-average resample to ``side`` x ``side``."""
    rgb = np.asarray(rgb)
    if rgb.ndim != 3 or rgb.shape[2] != 3:
        raise ValueError(f"expected an (H, W, 3) RGB array, got shape {rgb.shape}")
    if rgb.shape[0] == 0 or rgb.shape[1] == 0:
        raise ValueError("cannot resample an image with no pixels")
    if rgb.dtype != np.uint8:
        if rgb.min() < 0 or rgb.max() > 255:
            raise ValueError("RGB values must lie in [0, 255]")
        rgb = np.rint(rgb).astype(np.uint8)
    if rgb.shape[:2] == (side, side):
        return rgb
    im = Image.fromarray(np.ascontiguousarray(rgb))
    return np.asarray(im.resize((side, side), Image.Resampling.BOX))


def encode_hsv(hsv_img, cfg: PipelineConfig = PipelineConfig()) -> np.ndarray:
    # texture bit sits just above the color code (bit 8 under default bins)
    codes = quantize(hsv_img, cfg) + cfg.color_levels * texture_bits(
        hsv_img, cfg.texture_threshold
    ).astype(np.int64)
    return codes.astype(np.uint16).ravel()


def encode_image(img, cfg: PipelineConfig = PipelineConfig(), source_id: str = "") -> SymbolString:
    """Encode an RGB array (or image path) as a raster-order symbol string."""
    if isinstance(img, (str, Path)):
        if not source_id:
            source_id = Path(img).stem
        img = load_image(img)
    rgb = resample(img, cfg.target_side)
    return SymbolString(encode_hsv(rgb_to_hsv(rgb), cfg), source_id)
