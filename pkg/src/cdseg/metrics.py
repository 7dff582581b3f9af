"""Segmentation quality measures over binary masks."""

from __future__ import annotations

import warnings

import numpy as np


def _as_masks(mask, gt):
    m = np.asarray(mask, dtype=bool)
    g = np.asarray(gt, dtype=bool)
    if m.shape != g.shape:
        raise ValueError(f"mask shapes differ: {m.shape} vs {g.shape}")
    return m, g


def error_rate(mask, gt, box: tuple[int, int, int, int]) -> float:
    """Fraction of misclassified pixels inside the box."""
    m, g = _as_masks(mask, gt)
    x, y, w, h = box
    if w <= 0 or h <= 0:
        raise ValueError("box must have positive area")
    window = np.s_[y : y + h, x : x + w]
    wrong = (m[window] != g[window]).sum()
    total = m[window].size
    if total == 0:
        raise ValueError("box lies outside the mask")
    return float(wrong) / float(total)


def jaccard(mask, gt) -> float:
    """Intersection over union; two empty masks count as a perfect match."""
    m, g = _as_masks(mask, gt)
    union = (m | g).sum()
    if union == 0:
        warnings.warn("both masks empty; overlap defined as 1", stacklevel=2)
        return 1.0
    return float((m & g).sum()) / float(union)


def dsc(mask, gt) -> float:
    """Dice similarity: twice the overlap over the size sum."""
    m, g = _as_masks(mask, gt)
    total = int(m.sum()) + int(g.sum())
    if total == 0:
        warnings.warn("both masks empty; overlap defined as 1", stacklevel=2)
        return 1.0
    return 2.0 * float((m & g).sum()) / float(total)
