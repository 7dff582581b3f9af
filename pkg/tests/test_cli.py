import json

import numpy as np
import pytest

from cdseg.annotations import Annotation, Stroke
from cdseg.cli import main
from cdseg.fixtures import fixture_suite
from cdseg.graph import demo_graph, save_graph
from cdseg.imgio import load_mask_png, save_image


@pytest.fixture()
def graph_file(tmp_path):
    path = tmp_path / "demo.graph"
    save_graph(path, demo_graph())
    return path


def test_extract_reports_table_row(graph_file, capsys):
    assert main(["extract", "--graph", str(graph_file), "--seeds", "4", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["union_of_supports"] == [3, 4, 5, 6, 7]
    assert all(c["kkt_residual"] < 1e-6 for c in doc["clusters"])


def test_extract_text_report(graph_file, capsys):
    assert main(["extract", "--graph", str(graph_file), "--seeds", "0,3"]) == 0
    out = capsys.readouterr().out
    assert "cluster 0" in out and "union:" in out


def test_extract_unreadable_path_exits_1(capsys):
    assert main(["extract", "--graph", "/nonexistent/file", "--seeds", "1"]) == 1
    assert "error" in capsys.readouterr().err


def test_extract_malformed_file_exits_1(tmp_path, capsys):
    bad = tmp_path / "bad.graph"
    bad.write_text("2 1\n0 0 1.0\n")
    assert main(["extract", "--graph", str(bad), "--seeds", "0"]) == 1


def test_extract_empty_seeds_usage_error(graph_file):
    with pytest.raises(SystemExit) as exc:
        main(["extract", "--graph", str(graph_file), "--seeds", ""])
    assert exc.value.code == 2


def test_extract_out_of_range_seed(graph_file, capsys):
    assert main(["extract", "--graph", str(graph_file), "--seeds", "99"]) == 1


def write_fixture_inputs(tmp_path, fx, ann):
    image_path = tmp_path / "img.png"
    save_image(image_path, fx.image)
    ann_path = tmp_path / "ann.json"
    ann_path.write_text(ann.to_json())
    return image_path, ann_path


def test_segment_writes_mask_and_diagnostics(tmp_path):
    fx = fixture_suite()[0]
    rng = np.random.default_rng(0)
    ys, xs = np.nonzero(fx.ground_truth)
    pick = rng.choice(len(ys), size=30, replace=False)
    ann = Annotation(
        kind="scribble-foreground",
        strokes=tuple(Stroke("fg", ((int(xs[i]), int(ys[i])),)) for i in pick),
    )
    image_path, ann_path = write_fixture_inputs(tmp_path, fx, ann)
    out = tmp_path / "mask.png"
    assert main([
        "segment", "--image", str(image_path), "--annotation", str(ann_path),
        "--out", str(out),
    ]) == 0
    mask = load_mask_png(out)
    from cdseg.metrics import jaccard

    assert jaccard(mask, fx.ground_truth) >= 0.9
    doc = json.loads(out.with_suffix(".json").read_text())
    assert doc["output_meaning"] == "foreground"
    assert doc["settings"]["dynamics"] == "pairwise"


def test_segment_is_byte_deterministic(tmp_path):
    fx = fixture_suite()[1]
    ann = Annotation(kind="bounding-box", box=fx.box)
    image_path, ann_path = write_fixture_inputs(tmp_path, fx, ann)
    outputs = []
    for name in ("a.png", "b.png"):
        out = tmp_path / name
        assert main([
            "segment", "--image", str(image_path), "--annotation", str(ann_path),
            "--out", str(out),
        ]) == 0
        outputs.append((out.read_bytes(), out.with_suffix(".json").read_bytes()))
    assert outputs[0] == outputs[1]


def test_segment_looseness_flag_applies_dilation(tmp_path):
    fx = fixture_suite()[0]
    ann = Annotation(kind="loose-box", box=fx.box, looseness=0.0)
    image_path, ann_path = write_fixture_inputs(tmp_path, fx, ann)
    out = tmp_path / "mask.png"
    assert main([
        "segment", "--image", str(image_path), "--annotation", str(ann_path),
        "--out", str(out), "--looseness", "120",
    ]) == 0
    doc = json.loads(out.with_suffix(".json").read_text())
    assert doc["output_meaning"] == "background"


def test_segment_contradictory_flags_usage_error(tmp_path):
    fx = fixture_suite()[0]
    ann = Annotation(kind="scribble-foreground", strokes=(Stroke("fg", ((64, 64),)),))
    image_path, ann_path = write_fixture_inputs(tmp_path, fx, ann)
    with pytest.raises(SystemExit) as exc:
        main([
            "segment", "--image", str(image_path), "--annotation", str(ann_path),
            "--out", str(tmp_path / "m.png"), "--looseness", "120",
        ])
    assert exc.value.code == 2


def test_segment_bad_image_exits_1(tmp_path, capsys):
    bad = tmp_path / "bad.png"
    bad.write_bytes(b"nope")
    ann_path = tmp_path / "ann.json"
    ann_path.write_text(Annotation(kind="bounding-box", box=(0, 0, 10, 10)).to_json())
    assert main(["segment", "--image", str(bad), "--annotation", str(ann_path),
                 "--out", str(tmp_path / "m.png")]) == 1


def test_segment_bad_annotation_exits_1(tmp_path):
    fx = fixture_suite()[0]
    image_path = tmp_path / "img.png"
    save_image(image_path, fx.image)
    ann_path = tmp_path / "ann.json"
    ann_path.write_text("{\"kind\": \"nonsense\"}")
    assert main(["segment", "--image", str(image_path), "--annotation", str(ann_path),
                 "--out", str(tmp_path / "m.png")]) == 1
