"""Canonical JSON serialization: sorted keys, compact, byte-stable."""

from __future__ import annotations

import hashlib
import json

from ctt.errors import ParseError
from ctt.conceptgraph.model import (
    Concept,
    ConceptKind,
    ConceptMap,
    Provenance,
    Relation,
    RelationType,
)
from ctt.segmentation.propositions import PropositionSource, RootProposition

SCHEMA_VERSION = 1

_PROP_FIELDS = {"id", "title", "start_ms", "end_ms", "color_index", "source"}
_CONCEPT_FIELDS = {
    "id",
    "proposition_id",
    "label",
    "kind",
    "spans",
    "parent_id",
    "stems",
    "importance",
    "style_durations",
    "sub_distribution",
}
_RELATION_FIELDS = {"type", "src_id", "dst_id", "evidence"}
_MAP_FIELDS = {
    "schema_version",
    "video_id",
    "duration_ms",
    "propositions",
    "concepts",
    "relations",
    "provenance",
}
_PROVENANCE_FIELDS = {"pipeline_version", "config_hash", "llm_used"}


def map_to_dict(cmap: ConceptMap) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "video_id": cmap.video_id,
        "duration_ms": int(cmap.duration_ms),
        "propositions": [
            {
                "id": p.id,
                "title": p.title,
                "start_ms": int(p.start_ms),
                "end_ms": int(p.end_ms),
                "color_index": int(p.color_index),
                "source": p.source.value,
            }
            for p in cmap.propositions
        ],
        "concepts": [
            {
                "id": c.id,
                "proposition_id": c.proposition_id,
                "label": c.label,
                "kind": c.kind.value,
                "spans": [[int(s), int(e)] for s, e in c.spans],
                "parent_id": c.parent_id,
                "stems": list(c.stems),
                "importance": float(c.importance),
                "style_durations": {
                    k: int(v) for k, v in sorted(c.style_durations.items())
                },
                "sub_distribution": [
                    [cid, int(dur), float(imp)]
                    for cid, dur, imp in c.sub_distribution
                ],
            }
            for c in cmap.concepts
        ],
        "relations": [
            {
                "type": r.type.value,
                "src_id": r.src_id,
                "dst_id": r.dst_id,
                "evidence": r.evidence,
            }
            for r in cmap.relations
        ],
        "provenance": {
            "pipeline_version": cmap.provenance.pipeline_version,
            "config_hash": cmap.provenance.config_hash,
            "llm_used": bool(cmap.provenance.llm_used),
        },
    }


def to_canonical_json(cmap: ConceptMap) -> bytes:
    return json.dumps(
        map_to_dict(cmap),
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=True,
    ).encode("utf-8")


def map_hash(cmap: ConceptMap) -> str:
    return hashlib.sha256(to_canonical_json(cmap)).hexdigest()


def _check_fields(obj: dict, allowed: set[str], path: str) -> None:
    for key in obj:
        if key not in allowed:
            raise ParseError(f"{path}.{key}: unknown field")


def map_from_dict(payload: dict) -> ConceptMap:
    if not isinstance(payload, dict):
        raise ParseError("$: expected object")
    _check_fields(payload, _MAP_FIELDS, "$")
    version = payload.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ParseError(f"$.schema_version: got {version!r}, want {SCHEMA_VERSION}")

    try:
        props = []
        for i, raw in enumerate(payload.get("propositions", [])):
            _check_fields(raw, _PROP_FIELDS, f"$.propositions[{i}]")
            props.append(
                RootProposition(
                    id=str(raw["id"]),
                    title=str(raw["title"]),
                    start_ms=int(raw["start_ms"]),
                    end_ms=int(raw["end_ms"]),
                    color_index=int(raw["color_index"]),
                    source=PropositionSource(raw["source"]),
                )
            )
        concepts = []
        for i, raw in enumerate(payload.get("concepts", [])):
            _check_fields(raw, _CONCEPT_FIELDS, f"$.concepts[{i}]")
            concepts.append(
                Concept(
                    id=str(raw["id"]),
                    proposition_id=str(raw["proposition_id"]),
                    label=str(raw["label"]),
                    kind=ConceptKind(raw["kind"]),
                    spans=tuple((int(s), int(e)) for s, e in raw["spans"]),
                    parent_id=(
                        str(raw["parent_id"]) if raw.get("parent_id") else None
                    ),
                    stems=tuple(str(s) for s in raw.get("stems", [])),
                    importance=float(raw.get("importance", 0.0)),
                    style_durations={
                        str(k): int(v)
                        for k, v in raw.get("style_durations", {}).items()
                    },
                    sub_distribution=tuple(
                        (str(cid), int(dur), float(imp))
                        for cid, dur, imp in raw.get("sub_distribution", [])
                    ),
                )
            )
        relations = []
        for i, raw in enumerate(payload.get("relations", [])):
            _check_fields(raw, _RELATION_FIELDS, f"$.relations[{i}]")
            relations.append(
                Relation(
                    type=RelationType(raw["type"]),
                    src_id=str(raw["src_id"]),
                    dst_id=str(raw["dst_id"]),
                    evidence=dict(raw.get("evidence", {})),
                )
            )
        prov_raw = payload.get("provenance", {})
        _check_fields(prov_raw, _PROVENANCE_FIELDS, "$.provenance")
        provenance = Provenance(
            pipeline_version=str(prov_raw.get("pipeline_version", "")),
            config_hash=str(prov_raw.get("config_hash", "")),
            llm_used=bool(prov_raw.get("llm_used", False)),
        )
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"$: {exc}") from exc

    return ConceptMap(
        video_id=str(payload.get("video_id", "")),
        duration_ms=int(payload.get("duration_ms", 0)),
        propositions=props,
        concepts=concepts,
        relations=relations,
        provenance=provenance,
    )


def from_canonical_json(data: bytes) -> ConceptMap:
    try:
        payload = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"$: {exc}") from exc
    return map_from_dict(payload)
