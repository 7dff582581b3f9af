"""Standard 48-filter texture bank: 36 oriented first and second Gaussian
derivatives (6 orientations x 3 scales, elongation 3), 8 Laplacian-of-
Gaussian and 4 Gaussian filters, each normalized to zero mean and unit L1
norm so constant regions respond with exactly zero.
"""

from __future__ import annotations

import numpy as np

FILTER_COUNT = 48
DEFAULT_SUPPORT = 49


def _gaussian_1d(sigma: float, x: np.ndarray, order: int) -> np.ndarray:
    var = sigma * sigma
    g = np.exp(-(x * x) / (2.0 * var)) / np.sqrt(2.0 * np.pi * var)
    if order == 0:
        return g
    if order == 1:
        return -g * (x / var)
    return g * ((x * x - var) / (var * var))


def _normalize(f: np.ndarray) -> np.ndarray:
    f = f - f.mean()
    return f / np.abs(f).sum()


def _oriented_filter(scale: float, order: int, points: np.ndarray, sup: int) -> np.ndarray:
    # smooth along the rotated x axis at triple scale, differentiate along y
    gx = _gaussian_1d(3.0 * scale, points[0], 0)
    gy = _gaussian_1d(scale, points[1], order)
    return _normalize((gx * gy).reshape(sup, sup))


def _gaussian_2d(sigma: float, sup: int) -> np.ndarray:
    half = (sup - 1) // 2
    x, y = np.meshgrid(np.arange(-half, half + 1), np.arange(-half, half + 1))
    var = sigma * sigma
    return np.exp(-(x * x + y * y) / (2.0 * var)) / (2.0 * np.pi * var)


def _log_2d(sigma: float, sup: int) -> np.ndarray:
    half = (sup - 1) // 2
    x, y = np.meshgrid(np.arange(-half, half + 1), np.arange(-half, half + 1))
    var = sigma * sigma
    g = np.exp(-(x * x + y * y) / (2.0 * var)) / (2.0 * np.pi * var)
    return g * ((x * x + y * y) - 2.0 * var) / (var * var)


def texture_filter_bank(sup: int = DEFAULT_SUPPORT, scale_factor: float = 1.0) -> np.ndarray:
    """Build the bank as a (48, sup, sup) stack; deterministic.

    scale_factor shrinks every filter scale uniformly; useful for small
    images where the full-size bank would smear texture across structures.
    """
    if sup % 2 == 0:
        raise ValueError("filter support must be odd")
    half = (sup - 1) // 2
    coords = np.arange(-half, half + 1)
    x, y = np.meshgrid(coords, coords)
    base = np.stack([x.ravel(), y.ravel()])

    derivative_scales = [scale_factor * s for s in (1.0, np.sqrt(2.0), 2.0)]
    orientations = 6
    bank = []
    for order in (1, 2):
        for scale in derivative_scales:
            for k in range(orientations):
                angle = np.pi * k / orientations
                c, s = np.cos(angle), np.sin(angle)
                rotated = np.array([[c, -s], [s, c]]) @ base
                bank.append(_oriented_filter(scale, order, rotated, sup))

    blob_scales = [scale_factor * s for s in (1.0, np.sqrt(2.0), 2.0, 2.0 * np.sqrt(2.0))]
    for scale in blob_scales:
        bank.append(_normalize(_log_2d(scale, sup)))
    for scale in blob_scales:
        bank.append(_normalize(_log_2d(3.0 * scale, sup)))
    for scale in blob_scales:
        bank.append(_normalize(_gaussian_2d(scale, sup)))

    stack = np.stack(bank)
    assert stack.shape[0] == FILTER_COUNT
    return stack
