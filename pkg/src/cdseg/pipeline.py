"""End-to-end segmentation: image -> superpixels -> features -> affinity ->
constrained extraction -> pixel mask, for scribble, error-tolerant
scribble, bounding-box and loose-box annotations.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, asdict

import numpy as np

from .affinity import SigmaStrategy, build_affinity
from .annotations import Annotation, annotation_to_constraints, stroke_superpixels
from .constrained import ExtractionResult, extract_constrained_clusters
from .dynamics import SolverSettings
from .features import extract_features
from .superpixels import SuperpixelMap, compute_superpixels


@dataclass(frozen=True)
class PipelineSettings:
    # image-scale graphs favor the linear-per-step pairwise dynamics; the
    # replicator remains available through `dynamics="replicator"`
    superpixel_target: int = 256
    margin: float = 0.1
    dynamics: str = "pairwise"
    solver: SolverSettings = field(default_factory=SolverSettings)


@dataclass
class ClusterReport:
    support: tuple[int, ...]
    alpha: float
    bound: float
    objective: float
    kkt_residual: float
    converged: bool
    iterations: int
    min_step_gain: float = 0.0
    max_simplex_error: float = 0.0
    discarded: bool = False


@dataclass
class SegmentationDiagnostics:
    superpixel_count: int
    sigma_mode: str
    constraint_superpixels: tuple[int, ...]
    output_meaning: str  # "foreground" | "background"
    clusters: list[ClusterReport]
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "superpixel_count": self.superpixel_count,
            "sigma_mode": self.sigma_mode,
            "constraint_superpixels": list(self.constraint_superpixels),
            "output_meaning": self.output_meaning,
            "clusters": [asdict(c) for c in self.clusters],
            "warnings": list(self.warnings),
        }


def mask_from_superpixels(sp: SuperpixelMap, members) -> np.ndarray:
    lut = np.zeros(sp.count, dtype=bool)
    lut[list(members)] = True
    return lut[sp.labels]


def _cluster_reports(result: ExtractionResult) -> list[ClusterReport]:
    return [
        ClusterReport(
            support=c.support,
            alpha=c.alpha,
            bound=c.bound,
            objective=c.objective,
            kkt_residual=c.kkt_residual,
            converged=c.converged,
            iterations=c.iterations,
            min_step_gain=c.min_step_gain,
            max_simplex_error=c.max_simplex_error,
        )
        for c in result.clusters
    ]


def prepared_segment(
    sp: SuperpixelMap,
    affinity: np.ndarray,
    ann: Annotation,
    settings: PipelineSettings,
    sigma_mode: str,
) -> tuple[np.ndarray, SegmentationDiagnostics]:
    """Segmentation on precomputed superpixels and affinity (the service
    caches both); mask semantics follow the annotation kind."""
    constraints, meaning = annotation_to_constraints(ann, sp)
    result = extract_constrained_clusters(
        affinity,
        constraints,
        settings=settings.solver,
        margin=settings.margin,
        dynamics=settings.dynamics,
    )
    reports = _cluster_reports(result)
    notes: list[str] = []

    if ann.kind == "scribble-with-errors":
        contaminated = set(stroke_superpixels(sp, ann, "bg"))
        kept: set[int] = set()
        for cluster, report in zip(result.clusters, reports):
            if contaminated & set(cluster.support):
                report.discarded = True
            else:
                kept.update(cluster.support)
        if not kept:
            notes.append("every cluster contained background strokes; mask is empty")
            warnings.warn(notes[-1], stacklevel=2)
        mask = mask_from_superpixels(sp, kept)
    elif meaning == "foreground":
        mask = mask_from_superpixels(sp, result.union_of_supports)
    else:
        mask = ~mask_from_superpixels(sp, result.union_of_supports)

    diagnostics = SegmentationDiagnostics(
        superpixel_count=sp.count,
        sigma_mode=sigma_mode,
        constraint_superpixels=constraints,
        output_meaning=meaning,
        clusters=reports,
        warnings=notes,
    )
    return mask, diagnostics


def segment(
    image: np.ndarray,
    ann: Annotation,
    strategy: SigmaStrategy | None = None,
    settings: PipelineSettings | None = None,
) -> tuple[np.ndarray, SegmentationDiagnostics]:
    """Full chain on a raw image.  Scribble annotations return the extracted
    union as the mask; box annotations return its complement (the union is
    the background there).  Error-tolerant scribbles drop every cluster
    that contains a background-scribbled superpixel."""
    strategy = strategy or SigmaStrategy()
    settings = settings or PipelineSettings()
    sp = compute_superpixels(image, settings.superpixel_target)
    features = extract_features(image, sp)
    affinity = build_affinity(features, strategy)
    return prepared_segment(sp, affinity, ann, settings, strategy.mode)


def segment_error_tolerant(
    image: np.ndarray,
    ann: Annotation,
    strategy: SigmaStrategy | None = None,
    settings: PipelineSettings | None = None,
) -> tuple[np.ndarray, SegmentationDiagnostics]:
    """Explicit entry point for the foreground+background scribble mode."""
    if ann.kind != "scribble-with-errors":
        raise ValueError("segment_error_tolerant expects a scribble-with-errors annotation")
    return segment(image, ann, strategy, settings)
