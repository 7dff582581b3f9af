"""Experiment protocols over the fixture suite: per-image metric rows,
bounding-box looseness sweeps and synthetic-scribble error sweeps, with CSV
and JSON emission.
"""

from __future__ import annotations

import csv
import io
import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .affinity import SigmaStrategy, sweep_grid
from .annotations import Annotation
from .fixtures import Fixture
from .metrics import dsc, error_rate, jaccard
from .pipeline import PipelineSettings, segment
from .scribbles import ScribbleProtocol, generate_synthetic_scribbles


@dataclass
class MetricRow:
    image: str
    condition: str
    error_rate: float
    jaccard: float
    dsc: float


@dataclass
class MetricReport:
    rows: list[MetricRow] = field(default_factory=list)

    def add(self, image: str, condition: str, mask, gt, box) -> MetricRow:
        row = MetricRow(image, condition, error_rate(mask, gt, box), jaccard(mask, gt), dsc(mask, gt))
        self.rows.append(row)
        return row

    def mean(self, metric: str, condition: str | None = None) -> float:
        values = [
            getattr(r, metric) for r in self.rows if condition is None or r.condition == condition
        ]
        return float(np.mean(values))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["image", "condition", "error_rate", "jaccard", "dsc"])
        for r in self.rows:
            writer.writerow([r.image, r.condition, f"{r.error_rate:.6f}", f"{r.jaccard:.6f}", f"{r.dsc:.6f}"])
        return buf.getvalue()

    def to_json(self) -> str:
        conditions = sorted({r.condition for r in self.rows})
        return json.dumps(
            {
                "rows": [r.__dict__ for r in self.rows],
                "means": {
                    c: {
                        "error_rate": self.mean("error_rate", c),
                        "jaccard": self.mean("jaccard", c),
                        "dsc": self.mean("dsc", c),
                    }
                    for c in conditions
                },
            },
            sort_keys=True,
        )


def _quiet_segment(image, ann, strategy, settings):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return segment(image, ann, strategy, settings)


def best_sigma_segment(fixture: Fixture, ann: Annotation, settings: PipelineSettings,
                       metric: str = "jaccard"):
    """Per-image sigma sweep scored against ground truth; evaluation only,
    since no interactive user has the truth in hand."""
    best = None
    for sigma in sweep_grid(SigmaStrategy(mode="best")):
        mask, diag = _quiet_segment(fixture.image, ann, SigmaStrategy(mode="single", value=float(sigma)), settings)
        if metric == "jaccard":
            score = jaccard(mask, fixture.ground_truth)
        else:
            score = -error_rate(mask, fixture.ground_truth, fixture.box)
        if best is None or score > best[0]:
            best = (score, float(sigma), mask, diag)
    return best[2], best[3], best[1]


def run_looseness_sweep(
    fixtures: list[Fixture],
    looseness_values=(0, 120, 240, 600),
    strategy: SigmaStrategy | None = None,
    settings: PipelineSettings | None = None,
) -> MetricReport:
    """Box-mode error rates per fixture at each looseness level; the L=0
    column uses the baseline box unchanged."""
    strategy = strategy or SigmaStrategy(mode="single", value=0.15)
    settings = settings or PipelineSettings()
    report = MetricReport()
    for level in looseness_values:
        for fixture in fixtures:
            if level == 0:
                ann = Annotation(kind="bounding-box", box=fixture.box)
            else:
                ann = Annotation(kind="loose-box", box=fixture.box, looseness=float(level))
            mask, _ = _quiet_segment(fixture.image, ann, strategy, settings)
            report.add(fixture.name, f"L={level}", mask, fixture.ground_truth, fixture.box)
    return report


def run_scribble_error_sweep(
    fixtures: list[Fixture],
    protocol: ScribbleProtocol | None = None,
    strategy: SigmaStrategy | None = None,
    settings: PipelineSettings | None = None,
) -> MetricReport:
    """Error-tolerant segmentation at each synthetic-scribble error count;
    the condition label is the error percentage of the clean foreground."""
    protocol = protocol or ScribbleProtocol()
    strategy = strategy or SigmaStrategy(mode="single", value=0.15)
    settings = settings or PipelineSettings()
    report = MetricReport()
    for fixture in fixtures:
        annotations = generate_synthetic_scribbles(fixture.ground_truth, protocol)
        for count, ann in annotations.items():
            percent = round(100.0 * count / protocol.n_fg)
            mask, _ = _quiet_segment(fixture.image, ann, strategy, settings)
            report.add(fixture.name, f"errors={percent}%", mask, fixture.ground_truth, fixture.box)
    return report
