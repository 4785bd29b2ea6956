from __future__ import annotations

import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from corpus import write_video

from ctt.appserver.api import create_app
from ctt.appserver.cli import main as cli_main
from ctt.appserver.navigation import navigation_payload, quantile_class
from ctt.appserver.pipeline import persist_build, run_pipeline
from ctt.config import load_config
from ctt.mapstore.canonical import map_hash, to_canonical_json
from ctt.mapstore.store import MapStore


@pytest.fixture(scope="module")
def built(tmp_path_factory):
    """One synthetic video built and persisted into a store."""
    root = tmp_path_factory.mktemp("corpus")
    config_path, gt = write_video(root, 2)
    config = load_config(config_path)
    result = run_pipeline(config)
    store = MapStore(Path(config.store_dir))
    persist_build(result, store)
    store.write_artifact(
        result.map.video_id,
        "ground_truth.json",
        (root / "synth02" / "ground_truth.json").read_bytes(),
    )
    return config, result, store


@pytest.fixture()
def client(built):
    config, result, store = built
    return TestClient(create_app(store.root))


# ── pipeline behaviour ──────────────────────────────────────────────

def test_rerun_is_byte_identical(built):
    config, result, store = built
    again = run_pipeline(config)
    assert map_hash(again.map) == map_hash(result.map)
    assert to_canonical_json(again.map) == to_canonical_json(result.map)


def test_missing_transcript_reports_stage(tmp_path):
    from ctt.appserver.pipeline import StageError
    from ctt.config import PipelineConfig

    config = PipelineConfig(
        video_id="ghost", transcript_path=str(tmp_path / "nope.srt")
    )
    with pytest.raises(StageError) as err:
        run_pipeline(config)
    assert err.value.stage == "ingest"


def test_transcript_only_build(tmp_path):
    root = tmp_path
    config_path, _ = write_video(root, 3, with_slides=False)
    result = run_pipeline(load_config(config_path))
    assert result.outputs.propositions_no_slides is None
    assert result.outputs.slide_tree is None
    assert result.map.propositions
    assert all(
        p.source.value == "transcript_only" for p in result.map.propositions
    )


def test_provenance_recorded(built):
    _, result, _ = built
    assert result.map.provenance.pipeline_version
    assert len(result.map.provenance.config_hash) == 64
    assert result.map.provenance.llm_used is False


# ── navigation payload ──────────────────────────────────────────────

def test_quantile_class_constant_series_middle():
    assert quantile_class(3.0, [3.0, 3.0, 3.0], 5) == 2


def test_quantile_class_spread():
    values = [1.0, 2.0, 3.0, 4.0, 5.0]
    classes = [quantile_class(v, values, 5) for v in values]
    assert classes == [0, 1, 2, 3, 4]


def test_sunburst_rings_sum_to_full_circle(built):
    _, result, _ = built
    payload = navigation_payload(result.map)
    for ring in payload["sunburst"]["rings"]:
        total = sum(arc["angle"] for arc in ring)
        assert total == pytest.approx(360.0, abs=1e-6)


def test_sunburst_angles_proportional(built):
    _, result, _ = built
    payload = navigation_payload(result.map)
    duration = result.map.duration_ms
    for ring in payload["sunburst"]["rings"]:
        for arc in ring:
            expected = 360.0 * (arc["end_ms"] - arc["start_ms"]) / duration
            assert arc["angle"] == pytest.approx(expected, abs=1e-9)


def test_sunburst_child_over_parent_ratio(built):
    _, result, _ = built
    payload = navigation_payload(result.map)
    rings = payload["sunburst"]["rings"]
    arcs_by_id = {
        arc["id"]: arc for ring in rings for arc in ring if arc["id"]
    }
    checked = 0
    for ring in rings[1:]:
        for arc in ring:
            if arc["kind"] != "concept":
                continue
            parent = arcs_by_id.get(arc["parent_id"])
            if parent is None:
                continue
            dur = arc["end_ms"] - arc["start_ms"]
            parent_dur = parent["end_ms"] - parent["start_ms"]
            assert arc["angle"] / parent["angle"] == pytest.approx(
                dur / parent_dur, abs=1e-6
            )
            checked += 1
    assert checked > 0


def test_river_tiles_duration(built):
    config, result, store = built
    raw = store.read_artifact(result.map.video_id, "style_spans.json")
    styles = json.loads(raw)["spans"]
    payload = navigation_payload(result.map, styles)
    river = payload["river"]
    assert river[0]["start_ms"] == 0
    assert river[-1]["end_ms"] == result.map.duration_ms
    for a, b in zip(river, river[1:]):
        assert a["end_ms"] == b["start_ms"]


# ── HTTP API ────────────────────────────────────────────────────────

def test_get_map_canonical(client, built):
    _, result, _ = built
    response = client.get(f"/api/v1/videos/{result.map.video_id}/map")
    assert response.status_code == 200
    payload = response.json()
    assert payload["video_id"] == result.map.video_id
    assert payload["revision"] == 0
    assert response.content == client.get(
        f"/api/v1/videos/{result.map.video_id}/map"
    ).content


def test_get_unknown_video_error_payload(client):
    response = client.get("/api/v1/videos/ghost/map")
    assert response.status_code == 404
    payload = response.json()
    assert set(payload) == {"code", "message", "path"}
    assert payload["code"] == "not_found"


def test_get_navigation(client, built):
    _, result, _ = built
    response = client.get(f"/api/v1/videos/{result.map.video_id}/navigation")
    assert response.status_code == 200
    payload = response.json()
    assert payload["sunburst"]["rings"]
    assert payload["river"]
    assert payload["sparklines"]


def test_get_segment_earliest_span(client, built):
    _, result, _ = built
    concept = result.map.concepts[0]
    response = client.get(
        f"/api/v1/videos/{result.map.video_id}/segment/{concept.id}"
    )
    assert response.status_code == 200
    payload = response.json()
    assert payload["start_ms"] == concept.spans[0][0]
    assert payload["spans"] == [list(s) for s in concept.spans]


def test_get_eval(client, built):
    _, result, _ = built
    response = client.get(f"/api/v1/videos/{result.map.video_id}/eval")
    assert response.status_code == 200
    stages = {r["stage"] for r in response.json()["reports"]}
    assert "propositions" in stages
    assert "shots" in stages


def test_post_edit_and_conflict(client, built):
    _, result, _ = built
    video_id = result.map.video_id
    concept = result.map.concepts[0]
    op = {
        "op": "rename_concept",
        "payload": {"id": concept.id, "label": "renamed by test"},
        "author": "tester",
        "expected_revision": 0,
    }
    response = client.post(f"/api/v1/videos/{video_id}/edits", json=op)
    assert response.status_code == 200
    assert response.json()["revision"] == 1

    # Stale revision: conflict, state unchanged.
    stale = dict(op)
    stale["payload"] = {"id": concept.id, "label": "second rename"}
    response = client.post(f"/api/v1/videos/{video_id}/edits", json=stale)
    assert response.status_code == 409
    current = client.get(f"/api/v1/videos/{video_id}/map").json()
    assert current["revision"] == 1
    labels = {c["id"]: c["label"] for c in current["concepts"]}
    assert labels[concept.id] == "renamed by test"


def test_post_invalid_op(client, built):
    _, result, _ = built
    response = client.post(
        f"/api/v1/videos/{result.map.video_id}/edits",
        json={"op": "rename_concept", "payload": {"id": "ghost", "label": "x"}},
    )
    assert response.status_code == 422


def test_restart_stability(built):
    """A fresh app over the same store returns identical GET bodies."""
    config, result, store = built
    a = TestClient(create_app(store.root))
    b = TestClient(create_app(store.root))
    for endpoint in ("map", "navigation", "eval"):
        url = f"/api/v1/videos/{result.map.video_id}/{endpoint}"
        assert a.get(url).content == b.get(url).content


# ── CLI ─────────────────────────────────────────────────────────────

def test_cli_build_eval_round_trip(tmp_path, capsys):
    root = tmp_path
    config_path, _ = write_video(root, 4)
    assert cli_main(["build", "-c", str(config_path)]) == 0
    out1 = capsys.readouterr().out
    assert "map sha256" in out1

    # Idempotence: a second build prints the same hash.
    assert cli_main(["build", "-c", str(config_path)]) == 0
    out2 = capsys.readouterr().out
    assert out1.splitlines()[-1] == out2.splitlines()[-1]

    gt_dir = tmp_path / "gt"
    gt_dir.mkdir()
    (gt_dir / "synth04.json").write_bytes(
        (root / "synth04" / "ground_truth.json").read_bytes()
    )
    out_json = tmp_path / "eval.json"
    assert (
        cli_main(
            [
                "eval",
                "--gt",
                str(gt_dir),
                "--pred",
                str(root / "store"),
                "--out",
                str(out_json),
            ]
        )
        == 0
    )
    report = json.loads(out_json.read_text())
    assert "synth04" in report
    table = capsys.readouterr().out
    assert "propositions" in table


def test_cli_build_bad_config(tmp_path, capsys):
    bad = tmp_path / "bad.toml"
    bad.write_text('transcript_path = "missing.srt"\nbogus_key = 1\n')
    assert cli_main(["build", "-c", str(bad)]) == 2
    assert "config" in capsys.readouterr().err


def test_cli_build_missing_input_stage_named(tmp_path, capsys):
    cfg = tmp_path / "c.toml"
    cfg.write_text(
        f'transcript_path = "{(tmp_path / "nope.srt").as_posix()}"\n'
        f'store_dir = "{(tmp_path / "store").as_posix()}"\n'
    )
    assert cli_main(["build", "-c", str(cfg)]) == 1
    assert "[ingest]" in capsys.readouterr().err
