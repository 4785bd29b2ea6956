"""Record HTTP payload fixtures for the frontend test suite.

Builds three synthetic videos, captures their map and navigation
payloads exactly as the API serves them, and records an edit round
trip (pre map, edit op, post map, post navigation).  The frontend
tests replay these bytes; no live server is involved.
"""

from __future__ import annotations

import json
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from fastapi.testclient import TestClient

from corpus import write_video
from ctt.appserver.api import create_app
from ctt.appserver.pipeline import persist_build, run_pipeline
from ctt.config import load_config
from ctt.mapstore.store import MapStore

OUT = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    root = Path(tempfile.mkdtemp())
    store_dir = None
    video_ids = []
    for i in (0, 1, 2):
        config_path, _ = write_video(root, i)
        config = load_config(config_path)
        result = run_pipeline(config)
        store = MapStore(Path(config.store_dir))
        persist_build(result, store)
        store_dir = Path(config.store_dir)
        video_ids.append(result.map.video_id)

    client = TestClient(create_app(store_dir))
    for vid in video_ids:
        map_bytes = client.get(f"/api/v1/videos/{vid}/map").content
        nav_bytes = client.get(f"/api/v1/videos/{vid}/navigation").content
        (OUT / f"{vid}_map.json").write_bytes(map_bytes)
        (OUT / f"{vid}_navigation.json").write_bytes(nav_bytes)

    # Edit round trip on the first video.
    vid = video_ids[0]
    pre_map = json.loads((OUT / f"{vid}_map.json").read_bytes())
    target = pre_map["concepts"][0]["id"]
    op = {
        "op": "rename_concept",
        "payload": {"id": target, "label": "renamed from the ui"},
        "author": "fixture",
        "timestamp_ms": 0,
        "expected_revision": 0,
    }
    response = client.post(f"/api/v1/videos/{vid}/edits", json=op)
    assert response.status_code == 200, response.content
    post_map = client.get(f"/api/v1/videos/{vid}/map").content
    post_nav = client.get(f"/api/v1/videos/{vid}/navigation").content

    stale = dict(op)
    stale["payload"] = {"id": target, "label": "second attempt"}
    conflict = client.post(f"/api/v1/videos/{vid}/edits", json=stale)
    assert conflict.status_code == 409, conflict.content

    (OUT / "edit_roundtrip.json").write_text(
        json.dumps(
            {
                "video_id": vid,
                "op": op,
                "stale_op": stale,
                "post_revision": 1,
                "conflict_status": 409,
                "conflict_body": json.loads(conflict.content),
            },
            indent=1,
            sort_keys=True,
        ),
        encoding="utf-8",
    )
    (OUT / f"{vid}_map_post_edit.json").write_bytes(post_map)
    (OUT / f"{vid}_navigation_post_edit.json").write_bytes(post_nav)
    print(f"recorded fixtures for {video_ids} into {OUT}")


if __name__ == "__main__":
    main()
