"""Per-superpixel descriptors: median color in three color spaces plus the
mean absolute response of each texture filter, 57 numbers per region.
"""

from __future__ import annotations

import numpy as np
from scipy import signal
from skimage import color as skcolor

from .filters import DEFAULT_SUPPORT, FILTER_COUNT, texture_filter_bank
from .superpixels import SuperpixelMap

FEATURE_DIM = 9 + FILTER_COUNT

_bank_cache: dict[tuple[int, float], np.ndarray] = {}


def _bank_for(min_side: int) -> np.ndarray:
    """Texture bank sized to the image: small images carry proportionally
    finer texture, so the filter scales shrink with the short side (down to
    0.4x with a 19-pixel support) and reach the canonical 49-pixel bank at
    320 pixels and up."""
    factor = float(np.clip(min_side / 320.0, 0.4, 1.0))
    sup = DEFAULT_SUPPORT if factor == 1.0 else max(9, int(round(DEFAULT_SUPPORT * factor)) | 1)
    key = (sup, round(factor, 3))
    if key not in _bank_cache:
        _bank_cache[key] = texture_filter_bank(sup, factor)
    return _bank_cache[key]


def color_planes(image: np.ndarray) -> np.ndarray:
    """Stack of 9 color channels, each normalized to [0, 1]:
    RGB, L*a*b* (L/100, (a,b) shifted into [0,255]/255), HSV."""
    rgb = np.asarray(image, dtype=np.float64) / 255.0
    lab = skcolor.rgb2lab(rgb)
    hsv = skcolor.rgb2hsv(rgb)
    planes = [
        rgb[..., 0],
        rgb[..., 1],
        rgb[..., 2],
        lab[..., 0] / 100.0,
        (lab[..., 1] + 128.0) / 255.0,
        (lab[..., 2] + 128.0) / 255.0,
        hsv[..., 0],
        hsv[..., 1],
        hsv[..., 2],
    ]
    return np.stack(planes, axis=-1)


def luminance(image: np.ndarray) -> np.ndarray:
    rgb = np.asarray(image, dtype=np.float64) / 255.0
    return 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]


def texture_responses(image: np.ndarray) -> np.ndarray:
    """(48, h, w) filter responses of the luminance, reflect-padded so the
    borders carry no artificial edge energy."""
    lum = luminance(image)
    bank = _bank_for(min(lum.shape))
    half = (bank.shape[1] - 1) // 2
    padded = np.pad(lum, half, mode="reflect")
    responses = np.empty((bank.shape[0],) + lum.shape)
    for i, filt in enumerate(bank):
        responses[i] = signal.fftconvolve(padded, filt, mode="same")[half:-half, half:-half]
    return responses


def extract_features(image: np.ndarray, sp: SuperpixelMap) -> np.ndarray:
    """(count, 57) array: 9 color medians then 48 mean absolute responses."""
    img = np.asarray(image)
    if img.shape[:2] != sp.shape:
        raise ValueError("superpixel map does not match the image size")
    planes = color_planes(img)
    responses = np.abs(texture_responses(img))
    flat_labels = sp.labels.ravel()
    order = np.argsort(flat_labels, kind="stable")
    sorted_labels = flat_labels[order]
    boundaries = np.searchsorted(sorted_labels, np.arange(sp.count + 1))

    features = np.empty((sp.count, FEATURE_DIM))
    flat_planes = planes.reshape(-1, 9)[order]
    flat_resp = responses.reshape(FILTER_COUNT, -1)[:, order]
    for label in range(sp.count):
        lo, hi = boundaries[label], boundaries[label + 1]
        features[label, :9] = np.median(flat_planes[lo:hi], axis=0)
        features[label, 9:] = flat_resp[:, lo:hi].mean(axis=1)
    if not np.isfinite(features).all():
        raise ValueError("non-finite feature values")
    return features
