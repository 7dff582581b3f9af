"""Command-line entry points: constrained extraction on graph files,
image segmentation from annotation documents, and the local HTTP service.

Exit codes: 0 success, 1 malformed input, 2 solver abort (or usage error).
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from .affinity import SigmaStrategy
from .annotations import Annotation, AnnotationError, annotation_from_json
from .constrained import DYNAMICS, ExtractionError, extract_constrained_clusters
from .dynamics import SolverSettings
from .graph import GraphFormatError, load_graph
from .imgio import ImageFormatError, load_image, save_mask_png
from .pipeline import PipelineSettings, segment


def _parse_seeds(text: str) -> list[int]:
    try:
        seeds = [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"seeds must be comma-separated integers: {exc}")
    if not seeds:
        raise argparse.ArgumentTypeError("seed list is empty")
    return seeds


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cdseg", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    ext = sub.add_parser("extract", help="peel constrained clusters off a graph file")
    ext.add_argument("--graph", required=True, help="plain-text 'n m' + 'i j w' edge-list file")
    ext.add_argument("--seeds", required=True, type=_parse_seeds, help="comma-separated vertex ids")
    ext.add_argument("--dynamics", choices=sorted(DYNAMICS), default="replicator")
    ext.add_argument("--margin", type=float, default=0.1)
    ext.add_argument("--max-iterations", type=int, default=10000)
    ext.add_argument("--json", action="store_true", help="emit a JSON report instead of text")

    seg = sub.add_parser("segment", help="segment an image from an annotation document")
    seg.add_argument("--image", required=True, help="PNG or binary PPM input")
    seg.add_argument("--annotation", required=True, help="annotation JSON document")
    seg.add_argument("--out", required=True, help="output mask PNG; diagnostics JSON lands beside it")
    seg.add_argument("--sigma-mode", choices=["single", "self-tuning"], default="single")
    seg.add_argument("--sigma", type=float, default=0.15)
    seg.add_argument("--knn-k", type=int, default=7)
    seg.add_argument("--superpixels", type=int, default=256)
    seg.add_argument("--margin", type=float, default=0.1)
    seg.add_argument("--dynamics", choices=sorted(DYNAMICS), default="pairwise")
    seg.add_argument("--looseness", type=float, default=None,
                     help="override the looseness of a loose-box annotation")

    srv = sub.add_parser("serve", help="run the local HTTP service")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8571)
    return parser


def cli_extract(args) -> int:
    try:
        a = load_graph(args.graph)
    except (OSError, GraphFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    bad = [s for s in args.seeds if not 0 <= s < a.shape[0]]
    if bad:
        print(f"error: seeds {bad} out of range for {a.shape[0]} vertices", file=sys.stderr)
        return 1
    try:
        result = extract_constrained_clusters(
            a,
            args.seeds,
            settings=SolverSettings(max_iterations=args.max_iterations),
            margin=args.margin,
            dynamics=args.dynamics,
        )
    except ExtractionError as exc:
        print(f"solver abort: {exc}", file=sys.stderr)
        print(json.dumps(exc.diagnostics, sort_keys=True), file=sys.stderr)
        return 2

    if args.json:
        doc = {
            "graph": args.graph,
            "seeds": args.seeds,
            "dynamics": args.dynamics,
            "clusters": [
                {
                    "support": list(c.support),
                    "alpha": c.alpha,
                    "bound": c.bound,
                    "objective": c.objective,
                    "kkt_residual": c.kkt_residual,
                    "converged": c.converged,
                    "iterations": c.iterations,
                }
                for c in result.clusters
            ],
            "union_of_supports": list(result.union_of_supports),
        }
        print(json.dumps(doc, sort_keys=True))
    else:
        for i, c in enumerate(result.clusters):
            print(
                f"cluster {i}: support={list(c.support)} alpha={c.alpha:.6g} "
                f"objective={c.objective:.6g} kkt={c.kkt_residual:.3g} "
                f"converged={c.converged} iterations={c.iterations}"
            )
        print(f"union: {list(result.union_of_supports)}")
    return 0


def cli_segment(args, parser: argparse.ArgumentParser) -> int:
    try:
        image = load_image(args.image)
    except (OSError, ImageFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        ann = annotation_from_json(Path(args.annotation).read_text())
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except AnnotationError as exc:
        print(f"error: invalid annotation: {exc}", file=sys.stderr)
        return 1
    if args.looseness is not None:
        if ann.kind != "loose-box":
            parser.error("--looseness applies only to loose-box annotations")
        ann = Annotation(kind=ann.kind, strokes=ann.strokes, box=ann.box, looseness=args.looseness)

    strategy = (
        SigmaStrategy(mode="single", value=args.sigma)
        if args.sigma_mode == "single"
        else SigmaStrategy(mode="self-tuning", knn_k=args.knn_k)
    )
    settings = PipelineSettings(
        superpixel_target=args.superpixels, margin=args.margin, dynamics=args.dynamics
    )
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            mask, diagnostics = segment(image, ann, strategy, settings)
    except ExtractionError as exc:
        print(f"solver abort: {exc}", file=sys.stderr)
        return 2
    except (AnnotationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    out = Path(args.out)
    save_mask_png(out, mask)
    doc = diagnostics.to_dict()
    doc["settings"] = {
        "sigma_mode": args.sigma_mode,
        "sigma": args.sigma,
        "knn_k": args.knn_k,
        "superpixels": args.superpixels,
        "margin": args.margin,
        "dynamics": args.dynamics,
    }
    out.with_suffix(".json").write_text(json.dumps(doc, sort_keys=True) + "\n")
    print(f"mask written to {out}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "extract":
        return cli_extract(args)
    if args.command == "segment":
        return cli_segment(args, parser)
    if args.command == "serve":
        import uvicorn

        from .service import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return 0
    parser.error(f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
