"""Superpixel over-segmentation: iterative k-means in combined color and
position space on a regular seed grid, followed by orphan absorption so
every superpixel is one 4-connected region.  Deterministic given the image
and the requested count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage
from skimage import color as skcolor

MIN_COUNT = 16
MAX_COUNT = 4096
ITERATIONS = 10
COMPACTNESS = 10.0


@dataclass(frozen=True)
class SuperpixelMap:
    labels: np.ndarray  # (h, w) int32, ids dense in [0, count)
    count: int
    adjacency: tuple[tuple[int, int], ...]  # 4-neighbor label pairs, i < j

    @property
    def shape(self) -> tuple[int, int]:
        return self.labels.shape


def _adjacency(labels: np.ndarray) -> tuple[tuple[int, int], ...]:
    right = np.stack([labels[:, :-1].ravel(), labels[:, 1:].ravel()], axis=1)
    down = np.stack([labels[:-1, :].ravel(), labels[1:, :].ravel()], axis=1)
    pairs = np.concatenate([right, down])
    pairs = pairs[pairs[:, 0] != pairs[:, 1]]
    pairs = np.sort(pairs, axis=1)
    return tuple(map(tuple, np.unique(pairs, axis=0).tolist()))


def _enforce_connectivity(labels: np.ndarray, count: int) -> np.ndarray:
    """Keep each label's largest 4-connected component; absorb the rest into
    the neighboring label that touches them the most."""
    out = labels.copy()
    structure = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]])
    for label in range(count):
        mask = out == label
        if not mask.any():
            continue
        components, n_comp = ndimage.label(mask, structure=structure)
        if n_comp <= 1:
            continue
        sizes = ndimage.sum_labels(np.ones_like(components), components, range(1, n_comp + 1))
        keep = int(np.argmax(sizes)) + 1
        for comp in range(1, n_comp + 1):
            if comp == keep:
                continue
            region = components == comp
            ring = ndimage.binary_dilation(region, structure=structure) & ~region
            neighbor_labels = out[ring]
            neighbor_labels = neighbor_labels[neighbor_labels != label]
            if neighbor_labels.size == 0:
                continue
            values, counts = np.unique(neighbor_labels, return_counts=True)
            out[region] = values[np.argmax(counts)]
    return out


def compute_superpixels(image: np.ndarray, target_count: int) -> SuperpixelMap:
    """Segment an RGB uint8 image into roughly target_count superpixels."""
    if not MIN_COUNT <= target_count <= MAX_COUNT:
        raise ValueError(f"target_count must lie in [{MIN_COUNT}, {MAX_COUNT}]")
    img = np.asarray(image)
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError("expected an RGB image of shape (h, w, 3)")
    h, w = img.shape[:2]
    if h < 16 or w < 16:
        raise ValueError("image sides must be at least 16 pixels")

    lab = skcolor.rgb2lab(img.astype(np.float64) / 255.0)
    spacing = np.sqrt(h * w / target_count)
    grid_x = max(1, round(w / spacing))
    grid_y = max(1, round(h / spacing))

    ys, xs = np.mgrid[0:h, 0:w]
    centers = []
    for gy in range(grid_y):
        cy = (gy + 0.5) * h / grid_y
        for gx in range(grid_x):
            cx = (gx + 0.5) * w / grid_x
            iy, ix = int(cy), int(cx)
            centers.append(
                [lab[iy, ix, 0], lab[iy, ix, 1], lab[iy, ix, 2], float(cx), float(cy)]
            )
    centers = np.array(centers)
    count = len(centers)

    window = int(np.ceil(2.0 * spacing))
    ratio = (COMPACTNESS / spacing) ** 2
    labels = np.full((h, w), -1, dtype=np.int32)
    best = np.full((h, w), np.inf)
    for _ in range(ITERATIONS):
        labels.fill(-1)
        best.fill(np.inf)
        for idx in range(count):
            cl, ca, cb, cx, cy = centers[idx]
            x0, x1 = max(0, int(cx) - window), min(w, int(cx) + window + 1)
            y0, y1 = max(0, int(cy) - window), min(h, int(cy) + window + 1)
            patch = lab[y0:y1, x0:x1]
            dc = (
                (patch[..., 0] - cl) ** 2
                + (patch[..., 1] - ca) ** 2
                + (patch[..., 2] - cb) ** 2
            )
            dxy = (xs[y0:y1, x0:x1] - cx) ** 2 + (ys[y0:y1, x0:x1] - cy) ** 2
            dist = dc + ratio * dxy
            view = best[y0:y1, x0:x1]
            closer = dist < view
            view[closer] = dist[closer]
            labels[y0:y1, x0:x1][closer] = idx
        # stray pixels outside every window (possible on extreme aspect
        # ratios): attach to the nearest center by position
        stray = labels < 0
        if stray.any():
            sy, sx = np.nonzero(stray)
            d = (sx[:, None] - centers[None, :, 3]) ** 2 + (sy[:, None] - centers[None, :, 4]) ** 2
            labels[sy, sx] = np.argmin(d, axis=1)
        for idx in range(count):
            mask = labels == idx
            if not mask.any():
                continue
            centers[idx, 0] = lab[..., 0][mask].mean()
            centers[idx, 1] = lab[..., 1][mask].mean()
            centers[idx, 2] = lab[..., 2][mask].mean()
            centers[idx, 3] = xs[mask].mean()
            centers[idx, 4] = ys[mask].mean()

    labels = _enforce_connectivity(labels, count)
    # compact ids: some labels may have vanished during assignment
    present = np.unique(labels)
    remap = np.zeros(count, dtype=np.int32)
    remap[present] = np.arange(len(present), dtype=np.int32)
    labels = remap[labels]
    final_count = len(present)
    return SuperpixelMap(labels, final_count, _adjacency(labels))


def boundary_paths(sp: SuperpixelMap) -> list[list[tuple[float, float]]]:
    """Closed boundary polygon per superpixel, as (x, y) vertex lists, for
    overlay rendering."""
    from skimage import measure

    paths: list[list[tuple[float, float]]] = []
    for label in range(sp.count):
        mask = (sp.labels == label).astype(float)
        contours = measure.find_contours(np.pad(mask, 1), 0.5)
        if not contours:
            paths.append([])
            continue
        contour = max(contours, key=len)
        # pad offset and (row, col) -> (x, y)
        paths.append([(float(c - 1.0), float(r - 1.0)) for r, c in contour])
    return paths
