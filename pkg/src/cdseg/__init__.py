"""Constrained dominant-set clustering and interactive image segmentation.

A quadratic program over the standard simplex with a diagonal penalty on
unselected vertices guarantees that every extracted cluster touches the
user's selection; peeling clusters until the selection is exhausted turns
scribbles and bounding boxes into segmentation masks.
"""

from .affinity import SigmaStrategy, build_affinity
from .annotations import Annotation, AnnotationError, Stroke, annotation_from_json, dilate_box
from .constrained import (
    ExtractedCluster,
    ExtractionError,
    ExtractionResult,
    build_regularized_matrix,
    choose_alpha,
    clique_union_oracle,
    extract_constrained_clusters,
    spectral_bound,
)
from .dynamics import (
    DegenerateStateError,
    SolverOutcome,
    SolverSettings,
    barycenter,
    kkt_residual,
    replicator_step,
    run_pairwise_dynamics,
    run_replicator,
)
from .features import extract_features
from .fixtures import Fixture, fixture_suite
from .graph import (
    DominantSetCertificate,
    DominantSetRejection,
    GraphFormatError,
    OracleSizeError,
    WeightOracle,
    demo_graph,
    enumerate_maximal_cliques,
    is_dominant_set,
    load_graph,
    relative_similarity,
    save_graph,
    total_weight,
    validate_affinity,
    vertex_weight,
)
from .metrics import dsc, error_rate, jaccard
from .pipeline import PipelineSettings, SegmentationDiagnostics, segment, segment_error_tolerant
from .scribbles import ScribbleProtocol, generate_synthetic_scribbles
from .superpixels import SuperpixelMap, compute_superpixels
from .sweeps import MetricReport, run_looseness_sweep, run_scribble_error_sweep

__version__ = "0.1.0"
