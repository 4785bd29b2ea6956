"""File-backed map store: one directory per video, WAL + snapshot."""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path

from ctt.errors import UnknownVideo
from ctt.mapstore.canonical import from_canonical_json, to_canonical_json
from ctt.mapstore.edits import EditOp, StoredMap, apply_edit


class MapStore:
    """Persistence with single-writer-per-video semantics.

    The edit log is written ahead of the snapshot; loading replays any
    trailing log entries newer than the snapshot, so a crash between the
    two writes loses nothing.
    """

    def __init__(self, root: Path) -> None:
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _lock_for(self, video_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(video_id, threading.Lock())

    def _video_dir(self, video_id: str) -> Path:
        safe = "".join(c if c.isalnum() or c in "-_." else "_" for c in video_id)
        return self.root / safe

    def list_videos(self) -> list[str]:
        out = []
        for d in sorted(self.root.iterdir()):
            if (d / "snapshot.json").exists():
                out.append(d.name)
        return out

    def exists(self, video_id: str) -> bool:
        return (self._video_dir(video_id) / "snapshot.json").exists()

    def persist(self, stored: StoredMap) -> None:
        video_id = stored.map.video_id
        vdir = self._video_dir(video_id)
        vdir.mkdir(parents=True, exist_ok=True)
        with self._lock_for(video_id):
            log_path = vdir / "log.jsonl"
            lines = []
            base_revision = stored.revision - len(stored.edit_log)
            for i, op in enumerate(stored.edit_log):
                lines.append(
                    json.dumps(
                        {"revision": base_revision + i + 1, "op": op.to_dict()},
                        sort_keys=True,
                    )
                )
            _atomic_write(log_path, ("\n".join(lines) + "\n") if lines else "")

            # A revision-0 persist is the pipeline output: refresh the
            # replay baseline.  Edited maps never touch it.
            if not stored.edit_log:
                _atomic_write_bytes(
                    vdir / "original.json", to_canonical_json(stored.map)
                )

            snapshot = {
                "revision": stored.revision,
                "map": json.loads(to_canonical_json(stored.map)),
            }
            _atomic_write(
                vdir / "snapshot.json",
                json.dumps(snapshot, sort_keys=True, separators=(",", ":")),
            )

    def load(self, video_id: str) -> StoredMap:
        vdir = self._video_dir(video_id)
        snap_path = vdir / "snapshot.json"
        if not snap_path.exists():
            raise UnknownVideo(video_id)
        with self._lock_for(video_id):
            snapshot = json.loads(snap_path.read_text(encoding="utf-8"))
            revision = int(snapshot.get("revision", 0))
            cmap = from_canonical_json(
                json.dumps(snapshot["map"], sort_keys=True).encode("utf-8")
            )
            ops: list[EditOp] = []
            log_path = vdir / "log.jsonl"
            trailing: list[tuple[int, EditOp]] = []
            if log_path.exists():
                for line in log_path.read_text(encoding="utf-8").splitlines():
                    if not line.strip():
                        continue
                    entry = json.loads(line)
                    op = EditOp.from_dict(entry["op"])
                    ops.append(op)
                    if int(entry["revision"]) > revision:
                        trailing.append((int(entry["revision"]), op))
            stored = StoredMap(
                map=cmap, revision=revision, edit_log=ops[: len(ops) - len(trailing)]
            )
            for _, op in sorted(trailing):
                stored = apply_edit(stored, _strip_expected(op))
            return stored

    def original(self, video_id: str) -> bytes | None:
        path = self._video_dir(video_id) / "original.json"
        return path.read_bytes() if path.exists() else None

    def write_artifact(self, video_id: str, name: str, data: bytes) -> None:
        vdir = self._video_dir(video_id)
        vdir.mkdir(parents=True, exist_ok=True)
        _atomic_write_bytes(vdir / name, data)

    def read_artifact(self, video_id: str, name: str) -> bytes | None:
        path = self._video_dir(video_id) / name
        return path.read_bytes() if path.exists() else None


def _strip_expected(op: EditOp) -> EditOp:
    if op.expected_revision is None:
        return op
    return EditOp(
        op=op.op,
        payload=op.payload,
        author=op.author,
        timestamp_ms=op.timestamp_ms,
        expected_revision=None,
    )


def _atomic_write(path: Path, text: str) -> None:
    _atomic_write_bytes(path, text.encode("utf-8"))


def _atomic_write_bytes(path: Path, data: bytes) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)
