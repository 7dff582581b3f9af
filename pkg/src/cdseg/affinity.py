"""Gaussian-kernel affinity between feature vectors, with a global scale, a
per-image sweep, or local self-tuning scales.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

SWEEP_RANGE = (0.05, 0.2)
SWEEP_POINTS = 16
SELF_TUNING_KNN = 7
SIGMA_FLOOR = 1e-6


@dataclass(frozen=True)
class SigmaStrategy:
    mode: str = "single"  # "single" | "self-tuning" | "best"
    value: float = 0.1  # used by "single"
    sweep: tuple[float, float] = SWEEP_RANGE  # used by "best"
    knn_k: int = SELF_TUNING_KNN  # used by "self-tuning"

    def __post_init__(self):
        if self.mode not in ("single", "self-tuning", "best"):
            raise ValueError(f"unknown sigma mode {self.mode!r}")
        if self.mode == "single" and self.value <= 0:
            raise ValueError("sigma must be positive")
        if self.knn_k < 1:
            raise ValueError("knn_k must be at least 1")
        if self.sweep[0] <= 0 or self.sweep[1] < self.sweep[0]:
            raise ValueError("invalid sweep range")

    def cache_key(self) -> str:
        if self.mode == "single":
            return f"single:{self.value:.12g}"
        if self.mode == "self-tuning":
            return f"self-tuning:{self.knn_k}"
        return f"best:{self.sweep[0]:.12g}:{self.sweep[1]:.12g}"


def sweep_grid(strategy: SigmaStrategy, points: int = SWEEP_POINTS) -> np.ndarray:
    lo, hi = strategy.sweep
    return np.geomspace(lo, hi, points)


def build_affinity(features: np.ndarray, strategy: SigmaStrategy) -> np.ndarray:
    """Symmetric nonnegative affinity with zero diagonal from the pairwise
    feature distances.  The "best" mode needs ground truth to score the
    sweep, so it cannot be resolved here; callers run the grid themselves.
    """
    f = np.asarray(features, dtype=float)
    if f.ndim != 2 or f.shape[0] < 2:
        raise ValueError("need at least two feature vectors")
    if strategy.mode == "best":
        raise ValueError(
            "the per-image sweep needs ground truth; evaluate sweep_grid values with"
            " mode='single' instead"
        )
    diff = f[:, None, :] - f[None, :, :]
    sq = np.einsum("ijk,ijk->ij", diff, diff)
    if strategy.mode == "single":
        a = np.exp(-sq / (2.0 * strategy.value**2))
    else:
        n = f.shape[0]
        k = strategy.knn_k
        if k > n - 1:
            warnings.warn(
                f"self-tuning neighborhood {k} truncated to {n - 1} samples", stacklevel=2
            )
            k = n - 1
        dist = np.sqrt(sq)
        nearest = np.sort(dist, axis=1)[:, 1 : k + 1]  # column 0 is the zero self-distance
        sigma = nearest.mean(axis=1)
        if np.any(sigma < SIGMA_FLOOR):
            warnings.warn("identical features collapse the local scale; flooring", stacklevel=2)
            sigma = np.maximum(sigma, SIGMA_FLOOR)
        a = np.exp(-sq / (2.0 * np.outer(sigma, sigma)))
    np.fill_diagonal(a, 0.0)
    return a
