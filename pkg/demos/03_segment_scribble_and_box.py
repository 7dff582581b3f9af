"""Segment synthetic images with a foreground scribble and with a bounding
box, writing the inputs and masks to demos/out/.
"""

import warnings
from pathlib import Path

import numpy as np

from cdseg import PipelineSettings, SigmaStrategy, fixture_suite, jaccard, error_rate, segment
from cdseg.annotations import Annotation, Stroke
from cdseg.imgio import save_image, save_mask_png

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

strategy = SigmaStrategy(mode="single", value=0.15)
settings = PipelineSettings()

for fx in fixture_suite()[:3]:
    save_image(OUT / f"{fx.name}.png", fx.image)

    rng = np.random.default_rng(0)
    ys, xs = np.nonzero(fx.ground_truth)
    pick = rng.choice(len(ys), size=40, replace=False)
    scribble = Annotation(
        kind="scribble-foreground",
        strokes=tuple(Stroke("fg", ((int(xs[i]), int(ys[i])),)) for i in pick),
    )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        mask_s, diag_s = segment(fx.image, scribble, strategy, settings)
        box_ann = Annotation(kind="bounding-box", box=fx.box)
        mask_b, diag_b = segment(fx.image, box_ann, strategy, settings)

    save_mask_png(OUT / f"{fx.name}_scribble_mask.png", mask_s)
    save_mask_png(OUT / f"{fx.name}_box_mask.png", mask_b)
    print(
        f"{fx.name}: scribble IoU {jaccard(mask_s, fx.ground_truth):.3f} "
        f"({len(diag_s.clusters)} clusters), "
        f"box error {error_rate(mask_b, fx.ground_truth, fx.box):.3f} "
        f"({len(diag_b.clusters)} clusters, "
        f"alphas {[f'{c.alpha:.1f}' for c in diag_b.clusters[:4]]}...)"
    )

print(f"images and masks under {OUT}")
