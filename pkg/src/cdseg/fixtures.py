"""Procedural test images with exact ground truth: disks, rings, blobs and
textured scenes at 128x128, each with the tight bounding box of its
foreground.  Deterministic; the noise ones use fixed seeds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SIZE = 128


@dataclass(frozen=True)
class Fixture:
    name: str
    image: np.ndarray  # (h, w, 3) uint8
    ground_truth: np.ndarray  # (h, w) bool
    box: tuple[int, int, int, int]  # baseline bounding box (tight + small margin)


def _grid(size: int = SIZE):
    y, x = np.mgrid[0:size, 0:size]
    return x, y


def _disk(cx, cy, r, size=SIZE):
    x, y = _grid(size)
    return (x - cx) ** 2 + (y - cy) ** 2 <= r * r


def _paint(mask, fg_color, bg_color, size=SIZE):
    img = np.empty((size, size, 3), dtype=np.uint8)
    img[:] = bg_color
    img[mask] = fg_color
    return img


def _tight_box(mask, pad: int = 16, size: int = SIZE) -> tuple[int, int, int, int]:
    """Bounding box with a margin, like the human-drawn baseline boxes of
    the interactive-segmentation benchmarks.  A pixel-tight box would run
    its boundary ring through the object at the tangent points, and a ring
    hugging the object samples the texture halo instead of background."""
    ys, xs = np.nonzero(mask)
    x0 = max(0, int(xs.min()) - pad)
    y0 = max(0, int(ys.min()) - pad)
    x1 = min(size, int(xs.max()) + 1 + pad)
    y1 = min(size, int(ys.max()) + 1 + pad)
    return (x0, y0, x1 - x0, y1 - y0)


def _smooth_field(seed, amplitude, scale=8, size=SIZE):
    """Low-frequency brightness field; gives flat regions the gentle texture
    every real photograph has, which keeps feature space from collapsing."""
    from scipy import ndimage

    rng = np.random.default_rng(seed)
    coarse = rng.standard_normal((size // scale + 2, size // scale + 2))
    field = ndimage.zoom(coarse, scale, order=1)[:size, :size]
    return field / np.abs(field).max() * amplitude


def _with_noise(img, seed, amplitude=4, field_amplitude=14):
    rng = np.random.default_rng(seed)
    noisy = img.astype(np.float64)
    for c in range(3):
        noisy[..., c] += _smooth_field(seed * 3 + c, field_amplitude)
    noisy += rng.integers(-amplitude, amplitude + 1, size=img.shape)
    return np.clip(noisy, 0, 255).astype(np.uint8)


def _stripes(period=4, lo=60, hi=200, size=SIZE):
    x, _ = _grid(size)
    return np.where((x // period) % 2 == 0, lo, hi).astype(np.uint8)


def fixture_suite() -> list[Fixture]:
    fixtures = []

    gt = _disk(64, 64, 34)
    fixtures.append(Fixture("red_disk", _with_noise(_paint(gt, (200, 40, 40), (30, 60, 180)), 1), gt, _tight_box(gt)))

    gt = _disk(50, 70, 26)
    fixtures.append(Fixture("green_disk", _with_noise(_paint(gt, (60, 190, 80), (70, 70, 70)), 2), gt, _tight_box(gt)))

    gt = _disk(64, 60, 42) & ~_disk(64, 60, 24)
    fixtures.append(Fixture("ring", _with_noise(_paint(gt, (220, 200, 60), (90, 40, 130)), 3), gt, _tight_box(gt)))

    gt = _disk(42, 46, 20) | _disk(88, 84, 24)
    fixtures.append(Fixture("two_blobs", _with_noise(_paint(gt, (40, 200, 210), (150, 40, 40)), 4), gt, _tight_box(gt)))

    x, y = _grid()
    gt = (np.abs(x - 64) <= 28) & (np.abs(y - 66) <= 20)
    fixtures.append(Fixture("block", _with_noise(_paint(gt, (230, 90, 200), (40, 120, 60)), 5), gt, _tight_box(gt)))

    gt = _disk(34, 64, 16) | ((np.abs(x - 102) <= 11) & (np.abs(y - 64) <= 28))
    fixtures.append(Fixture("blob_and_bar", _with_noise(_paint(gt, (250, 150, 50), (20, 110, 120)), 6), gt, _tight_box(gt)))

    # textured foreground on a smooth background of the same mean gray
    gt = _disk(64, 64, 32)
    stripes = _stripes()
    img = np.empty((SIZE, SIZE, 3), dtype=np.uint8)
    img[:] = 130
    for c in range(3):
        channel = img[..., c]
        channel[gt] = stripes[gt]
    fixtures.append(Fixture("textured_disk", _with_noise(img, 7, amplitude=3, field_amplitude=6), gt, _tight_box(gt)))

    # smooth foreground on a heavily speckled background
    gt = _disk(70, 58, 28)
    rng = np.random.default_rng(8)
    speckle = rng.integers(0, 255, size=(SIZE, SIZE), dtype=np.int16)
    img = np.empty((SIZE, SIZE, 3), dtype=np.uint8)
    for c, base in enumerate((70, 90, 160)):
        img[..., c] = np.clip((speckle * 0.6 + base * 0.4), 0, 255).astype(np.uint8)
    img[gt] = (235, 235, 90)
    fixtures.append(Fixture("disk_on_speckle", img, gt, _tight_box(gt)))

    return fixtures
