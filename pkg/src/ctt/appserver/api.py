"""HTTP service over the map store."""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import FastAPI, Request, Response

from ctt.errors import ConflictingRevision, InvalidOp, UnknownVideo
from ctt.appserver.navigation import navigation_payload
from ctt.evalkit.report import (
    PipelineOutputs,
    evaluate_all,
    load_ground_truth,
)
from ctt.mapstore.canonical import to_canonical_json
from ctt.mapstore.edits import EditOp, apply_edit
from ctt.mapstore.store import MapStore
from ctt.slidestruct.tree import SlideTree


def _canonical_response(payload: dict, status_code: int = 200) -> Response:
    body = json.dumps(
        payload, sort_keys=True, separators=(",", ":"), ensure_ascii=True
    ).encode("utf-8")
    return Response(
        content=body, media_type="application/json", status_code=status_code
    )


def _error(status_code: int, code: str, message: str, path: str) -> Response:
    return _canonical_response(
        {"code": code, "message": message, "path": path}, status_code
    )


def create_app(store_dir: Path | str) -> FastAPI:
    store = MapStore(Path(store_dir))
    app = FastAPI(title="ctt", docs_url=None, redoc_url=None)

    def load_or_none(video_id: str):
        try:
            return store.load(video_id)
        except UnknownVideo:
            return None

    @app.get("/api/v1/videos")
    def list_videos() -> Response:
        return _canonical_response({"videos": store.list_videos()})

    @app.get("/api/v1/videos/{video_id}/map")
    def get_map(video_id: str) -> Response:
        stored = load_or_none(video_id)
        if stored is None:
            return _error(
                404, "not_found", f"unknown video {video_id}",
                f"/api/v1/videos/{video_id}/map",
            )
        body = to_canonical_json(stored.map)
        payload = json.loads(body)
        payload["revision"] = stored.revision
        return _canonical_response(payload)

    @app.get("/api/v1/videos/{video_id}/navigation")
    def get_navigation(video_id: str) -> Response:
        stored = load_or_none(video_id)
        if stored is None:
            return _error(
                404, "not_found", f"unknown video {video_id}",
                f"/api/v1/videos/{video_id}/navigation",
            )
        styles = None
        raw = store.read_artifact(video_id, "style_spans.json")
        if raw:
            styles = json.loads(raw).get("spans", [])
        sparks = None
        raw = store.read_artifact(video_id, "sparklines.json")
        if raw:
            sparks = json.loads(raw)
        payload = navigation_payload(stored.map, styles, sparks)
        payload["revision"] = stored.revision
        return _canonical_response(payload)

    @app.get("/api/v1/videos/{video_id}/eval")
    def get_eval(video_id: str) -> Response:
        path = f"/api/v1/videos/{video_id}/eval"
        stored = load_or_none(video_id)
        if stored is None:
            return _error(404, "not_found", f"unknown video {video_id}", path)
        gt_raw = store.read_artifact(video_id, "ground_truth.json")
        if gt_raw is None:
            return _error(404, "no_ground_truth", "no ground truth stored", path)
        pred_raw = store.read_artifact(video_id, "predictions.json")
        if pred_raw is None:
            return _error(404, "no_predictions", "run ctt build first", path)
        vdir = store._video_dir(video_id)
        gt = load_ground_truth(vdir / "ground_truth.json")
        outputs = _outputs_from_json(json.loads(pred_raw), store, video_id)
        reports = evaluate_all(outputs, gt)
        return _canonical_response({"reports": [r.to_dict() for r in reports]})

    @app.get("/api/v1/videos/{video_id}/segment/{concept_id}")
    def get_segment(video_id: str, concept_id: str) -> Response:
        path = f"/api/v1/videos/{video_id}/segment/{concept_id}"
        stored = load_or_none(video_id)
        if stored is None:
            return _error(404, "not_found", f"unknown video {video_id}", path)
        concept = stored.map.concept_by_id().get(concept_id)
        if concept is None:
            return _error(404, "not_found", f"unknown concept {concept_id}", path)
        return _canonical_response(
            {
                "concept_id": concept.id,
                "start_ms": concept.spans[0][0],
                "end_ms": concept.spans[0][1],
                "spans": [[s, e] for s, e in concept.spans],
            }
        )

    @app.post("/api/v1/videos/{video_id}/edits")
    async def post_edit(video_id: str, request: Request) -> Response:
        path = f"/api/v1/videos/{video_id}/edits"
        stored = load_or_none(video_id)
        if stored is None:
            return _error(404, "not_found", f"unknown video {video_id}", path)
        try:
            body = await request.json()
        except json.JSONDecodeError as exc:
            return _error(400, "bad_json", str(exc), path)
        try:
            op = EditOp.from_dict(body)
        except (KeyError, ValueError) as exc:
            return _error(400, "bad_op", str(exc), path)
        try:
            updated = apply_edit(stored, op)
        except ConflictingRevision as exc:
            return _error(409, "conflict", str(exc), path)
        except InvalidOp as exc:
            return _error(422, "invalid_op", str(exc), path)
        store.persist(updated)
        return _canonical_response({"revision": updated.revision})

    return app


def _outputs_from_json(
    predictions: dict, store: MapStore, video_id: str
) -> PipelineOutputs:
    tree = None
    raw = store.read_artifact(video_id, "slide_tree.json")
    if raw:
        tree = SlideTree.from_dict(json.loads(raw))
    no_slides = predictions.get("propositions_no_slides")
    return PipelineOutputs(
        propositions=[
            (p["title"], int(p["start_ms"]), int(p["end_ms"]))
            for p in predictions.get("propositions", [])
        ],
        propositions_no_slides=(
            [(p["title"], int(p["start_ms"]), int(p["end_ms"])) for p in no_slides]
            if no_slides is not None
            else None
        ),
        headlines=[
            (h["title"], int(h["start_ms"]))
            for h in predictions.get("headlines", [])
        ],
        slide_tree=tree,
        shot_boundaries=[int(i) for i in predictions.get("shot_boundaries", [])],
    )
