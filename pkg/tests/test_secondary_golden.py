"""Round-trip check between the browser annotator's serialized documents
and hand-written annotation JSON: both must parse to the same annotation
and map to identical constraint sets on the server side.

Skipped when the frontend's golden fixtures have not been generated.
"""

from pathlib import Path

import numpy as np
import pytest

from cdseg.annotations import annotation_from_json, annotation_to_constraints
from cdseg.superpixels import compute_superpixels

GOLDEN_DIR = Path(__file__).resolve().parent.parent / "frontend" / "golden"
HANDWRITTEN_DIR = Path(__file__).resolve().parent / "data" / "handwritten_annotations"

golden_files = sorted(GOLDEN_DIR.glob("annotation_*.json")) if GOLDEN_DIR.is_dir() else []

pytestmark = pytest.mark.skipif(
    len(golden_files) < 20, reason="frontend golden fixtures not generated"
)


@pytest.fixture(scope="module")
def superpixel_map():
    rng = np.random.default_rng(0)
    image = rng.integers(0, 255, size=(128, 128, 3), dtype=np.uint8)
    return compute_superpixels(image, 256)


def test_twenty_goldens_exist():
    assert len(golden_files) == 20
    assert len(sorted(HANDWRITTEN_DIR.glob("annotation_*.json"))) == 20


@pytest.mark.parametrize("name", [p.name for p in golden_files])
def test_golden_matches_handwritten_constraints(name, superpixel_map):
    golden = annotation_from_json((GOLDEN_DIR / name).read_text())
    handwritten = annotation_from_json((HANDWRITTEN_DIR / name).read_text())
    assert golden == handwritten
    golden_constraints = annotation_to_constraints(golden, superpixel_map)
    handwritten_constraints = annotation_to_constraints(handwritten, superpixel_map)
    assert golden_constraints == handwritten_constraints
    members, _ = golden_constraints
    assert members  # the annotation really selects something
