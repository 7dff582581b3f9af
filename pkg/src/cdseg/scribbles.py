"""Synthetic-scribble protocol: sample clean foreground/background seeds
from ground truth plus increasing numbers of deliberately wrong foreground
seeds from the error zone near the object.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .annotations import Annotation, Stroke

ERROR_COUNTS = (0, 5, 10, 20, 30, 40, 50)


@dataclass(frozen=True)
class ScribbleProtocol:
    n_fg: int = 50
    n_bg: int = 50
    error_zone_distance_percent: float = 5.0  # of the image diagonal
    error_counts: tuple[int, ...] = ERROR_COUNTS
    seed: int = 0

    def __post_init__(self):
        if list(self.error_counts) != sorted(self.error_counts):
            raise ValueError("error counts must be non-decreasing")


def error_zone(gt: np.ndarray, distance_percent: float) -> np.ndarray:
    """Background pixels closer to the foreground than the given percentage
    of the image diagonal."""
    g = np.asarray(gt, dtype=bool)
    limit = distance_percent / 100.0 * float(np.hypot(*g.shape))
    distance = ndimage.distance_transform_edt(~g)
    return (~g) & (distance > 0) & (distance < limit)


def generate_synthetic_scribbles(
    gt: np.ndarray, protocol: ScribbleProtocol | None = None
) -> dict[int, Annotation]:
    """One annotation per error count, sharing the same clean seeds; the
    error pixels are sampled once and nested by prefix, so a higher count
    extends a lower one.  Deterministic per protocol seed."""
    protocol = protocol or ScribbleProtocol()
    g = np.asarray(gt, dtype=bool)
    rng = np.random.default_rng(protocol.seed)

    fy, fx = np.nonzero(g)
    by, bx = np.nonzero(~g)
    if len(fy) < protocol.n_fg:
        raise ValueError(f"ground truth has only {len(fy)} foreground pixels, need {protocol.n_fg}")
    if len(by) < protocol.n_bg:
        raise ValueError(f"ground truth has only {len(by)} background pixels, need {protocol.n_bg}")
    fg_idx = rng.choice(len(fy), size=protocol.n_fg, replace=False)
    bg_idx = rng.choice(len(by), size=protocol.n_bg, replace=False)

    zone = error_zone(g, protocol.error_zone_distance_percent)
    zy, zx = np.nonzero(zone)
    max_errors = max(protocol.error_counts)
    available = len(zy)
    if available < max_errors:
        warnings.warn(
            f"error zone holds {available} pixels, below the largest requested "
            f"count {max_errors}; sampling them all",
            stacklevel=2,
        )
    err_idx = rng.choice(available, size=min(max_errors, available), replace=False)

    fg_strokes = [Stroke("fg", ((int(fx[i]), int(fy[i])),)) for i in fg_idx]
    bg_strokes = [Stroke("bg", ((int(bx[i]), int(by[i])),)) for i in bg_idx]
    annotations = {}
    for count in protocol.error_counts:
        wrong = [
            Stroke("fg", ((int(zx[i]), int(zy[i])),))
            for i in err_idx[: min(count, len(err_idx))]
        ]
        annotations[count] = Annotation(
            kind="scribble-with-errors",
            strokes=tuple(fg_strokes + bg_strokes + wrong),
        )
    return annotations
