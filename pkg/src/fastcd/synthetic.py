"""Procedural test images and symbol strings."""

from __future__ import annotations

import numpy as np

# two RGB endpoints per class; the texture field interpolates between them
PALETTES = (
    ((200, 30, 30), (250, 200, 180)),
    ((20, 40, 160), (230, 220, 40)),
    ((10, 90, 20), (140, 220, 90)),
    ((110, 20, 130), (40, 210, 220)),
    ((240, 120, 10), (60, 40, 20)),
    ((30, 30, 30), (235, 235, 235)),
    ((0, 150, 150), (250, 90, 160)),
)

KINDS = ("stripes", "checker", "blobs", "rings", "gradient", "dots", "waves")


def _smooth_noise(rng, side, cells):
    coarse = rng.random((cells + 1, cells + 1))
    idx = np.linspace(0, cells, side)
    i0 = np.floor(idx).astype(int).clip(0, cells - 1)
    f = idx - i0
    rows = coarse[i0] * (1 - f)[:, None] + coarse[i0 + 1] * f[:, None]
    return rows[:, i0] * (1 - f)[None, :] + rows[:, i0 + 1] * f[None, :]


def texture_field(kind: str, rng: np.random.Generator, side: int) -> np.ndarray:
    """Scalar field in [0, 1] of shape (side, side)."""
    y, x = np.mgrid[0:side, 0:side] / side
    phase = rng.random() * 2 * np.pi
    if kind == "stripes":
        f = 0.5 + 0.5 * np.sin(2 * np.pi * rng.uniform(3, 6) * y + phase)
    elif kind == "checker":
        n = rng.integers(4, 9)
        f = ((np.floor(x * n) + np.floor(y * n)) % 2).astype(float)
    elif kind == "blobs":
        f = _smooth_noise(rng, side, int(rng.integers(3, 7)))
    elif kind == "rings":
        cx, cy = rng.uniform(0.3, 0.7, 2)
        r = np.hypot(x - cx, y - cy)
        f = 0.5 + 0.5 * np.cos(2 * np.pi * rng.uniform(4, 8) * r + phase)
    elif kind == "gradient":
        a = rng.uniform(0, 2 * np.pi)
        f = (np.cos(a) * x + np.sin(a) * y)
        f = (f - f.min()) / max(f.max() - f.min(), 1e-9)
    elif kind == "dots":
        n = rng.integers(5, 10)
        u = (x * n) % 1 - 0.5
        v = (y * n) % 1 - 0.5
        f = (np.hypot(u, v) < rng.uniform(0.2, 0.4)).astype(float)
    elif kind == "waves":
        f = 0.5 + 0.5 * np.sin(2 * np.pi * rng.uniform(3, 6) * x + 2 * np.sin(2 * np.pi * 2 * y) + phase)
    else:
        raise ValueError(f"unknown texture kind {kind!r}")
    return f


def textured_image(
    kind: str,
    palette,
    rng: np.random.Generator,
    side: int = 64,
    noise: float = 12.0,
) -> np.ndarray:
    """(side, side, 3) uint8 image from one texture kind and a palette."""
    f = texture_field(kind, rng, side)[..., None]
    c0, c1 = (np.asarray(c, float) + rng.normal(0, 8, 3) for c in palette)
    img = c0 * (1 - f) + c1 * f + rng.normal(0, noise, (side, side, 3))
    return np.clip(np.rint(img), 0, 255).astype(np.uint8)


def make_classes(n_classes: int = 5, per_class: int = 20, side: int = 64, seed: int = 0):
    """Labelled images: class ``k`` pairs texture ``KINDS[k]`` with ``PALETTES[k]``.

    Returns ``(images, labels)`` with labels ``"c0"``, ``"c1"``, ...
    """
    if n_classes > len(KINDS):
        raise ValueError(f"at most {len(KINDS)} classes available")
    rng = np.random.default_rng(seed)
    images, labels = [], []
    for k in range(n_classes):
        for _ in range(per_class):
            images.append(textured_image(KINDS[k], PALETTES[k], rng, side))
            labels.append(f"c{k}")
    return images, labels


def random_image(rng: np.random.Generator, side: int = 64) -> np.ndarray:
    kind = KINDS[rng.integers(len(KINDS))]
    palette = PALETTES[rng.integers(len(PALETTES))]
    return textured_image(kind, palette, rng, side, noise=rng.uniform(0, 30))


def random_symbols(rng: np.random.Generator, n: int, alphabet: int = 512, low: int = 0) -> np.ndarray:
    return rng.integers(low, low + alphabet, n).astype(np.uint16)


def markov_symbols(rng: np.random.Generator, n: int, alphabet: int = 512, stay: float = 0.9) -> np.ndarray:
    """Low-entropy string: repeat the previous symbol with probability ``stay``."""
    jumps = rng.random(n) >= stay
    jumps[0] = True
    values = rng.integers(0, alphabet, int(jumps.sum()))
    return values[np.cumsum(jumps) - 1].astype(np.uint16)
