"""User annotations: scribbles (clean or with background correction
strokes), bounding boxes and loose boxes, their JSON interchange form, and
the mapping onto superpixel constraint sets.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .superpixels import SuperpixelMap

KINDS = ("scribble-foreground", "scribble-with-errors", "bounding-box", "loose-box")
BOX_KINDS = ("bounding-box", "loose-box")


class AnnotationError(ValueError):
    pass


@dataclass(frozen=True)
class Stroke:
    tag: str  # "fg" | "bg"
    points: tuple[tuple[int, int], ...]  # (x, y) pixels

    def __post_init__(self):
        if self.tag not in ("fg", "bg"):
            raise AnnotationError(f"stroke tag must be 'fg' or 'bg', got {self.tag!r}")
        if not self.points:
            raise AnnotationError("stroke needs at least one point")


@dataclass(frozen=True)
class Annotation:
    kind: str
    strokes: tuple[Stroke, ...] = ()
    box: tuple[int, int, int, int] | None = None  # x, y, w, h
    looseness: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise AnnotationError(f"unknown annotation kind {self.kind!r}")
        if self.kind in BOX_KINDS:
            if self.box is None:
                raise AnnotationError(f"{self.kind} requires a box")
            x, y, w, h = self.box
            if w <= 0 or h <= 0:
                raise AnnotationError("box must have positive area")
        else:
            if not self.strokes:
                raise AnnotationError(f"{self.kind} requires at least one stroke")
            if self.kind == "scribble-foreground" and any(s.tag == "bg" for s in self.strokes):
                raise AnnotationError("scribble-foreground carries no background strokes")
            if self.kind == "scribble-with-errors":
                tags = {s.tag for s in self.strokes}
                if tags != {"fg", "bg"}:
                    raise AnnotationError("scribble-with-errors needs both stroke kinds")
        if self.looseness < 0:
            raise AnnotationError("looseness must be nonnegative")
        if self.looseness > 0 and self.kind != "loose-box":
            raise AnnotationError("looseness applies only to loose-box annotations")

    def to_json(self) -> str:
        doc = {
            "kind": self.kind,
            "strokes": [{"tag": s.tag, "points": [list(p) for p in s.points]} for s in self.strokes],
            "box": list(self.box) if self.box is not None else None,
            "looseness": self.looseness,
        }
        return json.dumps(doc, sort_keys=True)


def annotation_from_json(text: str) -> Annotation:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AnnotationError(f"invalid annotation JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise AnnotationError("annotation document must be an object")
    try:
        strokes = tuple(
            Stroke(s["tag"], tuple((int(x), int(y)) for x, y in s["points"]))
            for s in doc.get("strokes", [])
        )
        box = doc.get("box")
        return Annotation(
            kind=doc["kind"],
            strokes=strokes,
            box=tuple(int(v) for v in box) if box is not None else None,
            looseness=float(doc.get("looseness", 0.0)),
        )
    except AnnotationError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise AnnotationError(f"malformed annotation document: {exc}") from exc


def dilate_box(
    box: tuple[int, int, int, int], looseness_percent: float, bounds: tuple[int, int]
) -> tuple[int, int, int, int]:
    """Grow the box so its area increases by the given percentage, padding
    all four sides by the same whole number of pixels, then clamp to the
    image.  Zero looseness returns the box unchanged (after clamping)."""
    if looseness_percent < 0:
        raise AnnotationError("looseness must be nonnegative")
    x, y, w, h = box
    width, height = bounds
    if looseness_percent > 0:
        # (w + 2p)(h + 2p) = (1 + L/100) w h  ->  4p^2 + 2(w+h)p - whL/100 = 0
        disc = (w + h) ** 2 + 4.0 * w * h * looseness_percent / 100.0
        pad = round((-(w + h) + math.sqrt(disc)) / 4.0)
        x, y, w, h = x - pad, y - pad, w + 2 * pad, h + 2 * pad
    x0, y0 = max(0, x), max(0, y)
    x1, y1 = min(width, x + w), min(height, y + h)
    if x1 <= x0 or y1 <= y0:
        raise AnnotationError("box lies outside the image")
    return (x0, y0, x1 - x0, y1 - y0)


def _stroke_pixels(strokes, tag: str, shape: tuple[int, int]) -> np.ndarray:
    """All pixels covered by strokes with the given tag; polylines are
    rasterized segment by segment."""
    h, w = shape
    pixels: set[tuple[int, int]] = set()
    for stroke in strokes:
        if stroke.tag != tag:
            continue
        pts = stroke.points
        for (x0, y0), (x1, y1) in zip(pts, pts[1:] if len(pts) > 1 else pts):
            steps = max(abs(x1 - x0), abs(y1 - y0), 1)
            for t in range(steps + 1):
                x = round(x0 + (x1 - x0) * t / steps)
                y = round(y0 + (y1 - y0) * t / steps)
                if 0 <= x < w and 0 <= y < h:
                    pixels.add((x, y))
    if not pixels:
        return np.empty((0, 2), dtype=int)
    return np.array(sorted(pixels), dtype=int)


def stroke_superpixels(sp: SuperpixelMap, ann: Annotation, tag: str) -> tuple[int, ...]:
    pixels = _stroke_pixels(ann.strokes, tag, sp.shape)
    if pixels.size == 0:
        return ()
    labels = sp.labels[pixels[:, 1], pixels[:, 0]]
    return tuple(sorted(set(int(v) for v in labels)))


def box_ring_superpixels(sp: SuperpixelMap, box: tuple[int, int, int, int]) -> tuple[int, ...]:
    """Superpixels intersecting the one-pixel boundary ring of the box."""
    h, w = sp.shape
    x, y, bw, bh = box
    x0, y0 = max(0, x), max(0, y)
    x1, y1 = min(w, x + bw), min(h, y + bh)
    if x1 <= x0 or y1 <= y0:
        raise AnnotationError("box lies outside the image")
    labels = sp.labels
    ring = np.concatenate(
        [
            labels[y0, x0:x1],
            labels[y1 - 1, x0:x1],
            labels[y0:y1, x0],
            labels[y0:y1, x1 - 1],
        ]
    )
    return tuple(sorted(set(int(v) for v in ring)))


def annotation_to_constraints(ann: Annotation, sp: SuperpixelMap) -> tuple[tuple[int, ...], str]:
    """Constraint superpixels plus the meaning of the extracted union:
    'foreground' for scribble modes, 'background' for box modes."""
    if ann.kind in BOX_KINDS:
        box = ann.box
        if ann.kind == "loose-box" and ann.looseness > 0:
            box = dilate_box(box, ann.looseness, (sp.shape[1], sp.shape[0]))
        members = box_ring_superpixels(sp, box)
        mode = "background"
    else:
        members = stroke_superpixels(sp, ann, "fg")
        mode = "foreground"
    if not members:
        raise AnnotationError("annotation touches no superpixels")
    return members, mode
