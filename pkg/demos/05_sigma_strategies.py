"""Compare the three affinity-scale strategies on one fixture: a fixed
global sigma, local self-tuning scales, and the per-image sweep scored
against ground truth (the framework's upper bound, usable only when the
truth is known).
"""

import warnings

import numpy as np

from cdseg import PipelineSettings, SigmaStrategy, fixture_suite, jaccard, segment
from cdseg.annotations import Annotation, Stroke
from cdseg.sweeps import best_sigma_segment

fx = [f for f in fixture_suite() if f.name == "textured_disk"][0]
rng = np.random.default_rng(0)
ys, xs = np.nonzero(fx.ground_truth)
pick = rng.choice(len(ys), size=40, replace=False)
scribble = Annotation(
    kind="scribble-foreground",
    strokes=tuple(Stroke("fg", ((int(xs[i]), int(ys[i])),)) for i in pick),
)
settings = PipelineSettings()

for label, strategy in (
    ("single 0.10", SigmaStrategy(mode="single", value=0.10)),
    ("single 0.15", SigmaStrategy(mode="single", value=0.15)),
    ("self-tuning", SigmaStrategy(mode="self-tuning")),
):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        mask, _ = segment(fx.image, scribble, strategy, settings)
    print(f"{label:12s}: IoU {jaccard(mask, fx.ground_truth):.3f}")

mask, _, sigma = best_sigma_segment(fx, scribble, settings)
print(f"best (sweep) : IoU {jaccard(mask, fx.ground_truth):.3f} at sigma {sigma:.3f}")
