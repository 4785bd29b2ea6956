from __future__ import annotations

import json
import random

import pytest

from ctt.conceptgraph.model import (
    Concept,
    ConceptKind,
    ConceptMap,
    Provenance,
    Relation,
    RelationType,
    concept_id,
)
from ctt.conceptgraph.relations import (
    inclusion_relations,
    sequence_relations_by_group,
)
from ctt.errors import ConflictingRevision, InvalidOp, ParseError, UnknownVideo
from ctt.mapstore import (
    EditOp,
    EditOpType,
    MapStore,
    StoredMap,
    apply_edit,
    from_canonical_json,
    map_hash,
    to_canonical_json,
    validate,
)
from ctt.segmentation.propositions import (
    PropositionSource,
    RootProposition,
    proposition_id,
)


def _prop(title, start, end, color):
    return RootProposition(
        id=proposition_id("v", title, start),
        title=title,
        start_ms=start,
        end_ms=end,
        color_index=color,
    )


def _concept(prop, label, spans, parent=None, kind=ConceptKind.CONCEPT):
    return Concept(
        id=concept_id(prop.id, label, spans[0][0]),
        proposition_id=prop.id,
        label=label,
        kind=kind,
        spans=tuple(spans),
        parent_id=parent,
        stems=tuple(label.split()),
    )


def fixture_map() -> ConceptMap:
    p1 = _prop("hash tables", 0, 60_000, 0)
    p2 = _prop("binary search", 60_000, 120_000, 1)
    chaining = _concept(p1, "chaining", [(5_000, 30_000)])
    buckets = _concept(p1, "buckets", [(6_000, 12_000)], parent=chaining.id)
    load = _concept(p1, "load factor", [(31_000, 45_000)])
    pivot = _concept(p2, "pivot", [(61_000, 80_000)])
    concepts = [chaining, buckets, load, pivot]
    relations = (
        inclusion_relations(concepts)
        + sequence_relations_by_group(concepts)
        + [
            Relation(
                type=RelationType.ASSOCIATION,
                src_id=pivot.id,
                dst_id=chaining.id,
                evidence={"kind": "mention", "at_ms": 62_000},
            ),
            Relation(
                type=RelationType.SIMILARITY,
                src_id=min(chaining.id, load.id),
                dst_id=max(chaining.id, load.id),
                evidence={"kind": "cosine", "cosine": 0.8},
            ),
        ]
    )
    return ConceptMap(
        video_id="v",
        duration_ms=120_000,
        propositions=[p1, p2],
        concepts=sorted(concepts, key=lambda c: (c.first_start_ms, c.label)),
        relations=sorted(relations, key=lambda r: r.key()),
        provenance=Provenance("0.1.0", "cfg", False),
    )


def stored() -> StoredMap:
    return StoredMap(map=fixture_map(), revision=0, edit_log=[])


# ── validation ──────────────────────────────────────────────────────

def test_valid_fixture_no_violations():
    assert validate(fixture_map()) == []


def test_missing_endpoint_violation():
    cmap = fixture_map()
    cmap.relations.append(
        Relation(RelationType.ASSOCIATION, "ghost", cmap.concepts[0].id, {})
    )
    violations = validate(cmap)
    assert any(v.rule == "endpoint" for v in violations)


def test_inclusion_cycle_violation():
    # DFS cycle oracle: a -> b -> a through parent links.
    cmap = fixture_map()
    from dataclasses import replace

    a = cmap.concepts[0]
    b = next(c for c in cmap.concepts if c.parent_id == a.id)
    cmap.concepts = [
        replace(c, parent_id=b.id) if c.id == a.id else c for c in cmap.concepts
    ]
    violations = validate(cmap)
    assert any(v.rule == "cycle" for v in violations)


def test_tiling_gap_violation():
    cmap = fixture_map()
    from dataclasses import replace

    cmap.propositions[0] = replace(cmap.propositions[0], end_ms=50_000)
    violations = validate(cmap)
    assert any(v.rule == "tiling" for v in violations)


# ── canonical serialization ─────────────────────────────────────────

def test_round_trip_byte_identity():
    blob = to_canonical_json(fixture_map())
    again = to_canonical_json(from_canonical_json(blob))
    assert again == blob


def test_reordered_input_same_canonical_bytes():
    blob = to_canonical_json(fixture_map())
    payload = json.loads(blob)
    scrambled = {k: payload[k] for k in reversed(list(payload))}
    assert json.dumps(scrambled) != json.dumps(payload)
    rebuilt = from_canonical_json(json.dumps(scrambled).encode())
    assert to_canonical_json(rebuilt) == blob


def test_unknown_field_parse_error_with_path():
    payload = json.loads(to_canonical_json(fixture_map()))
    payload["concepts"][0]["bogus"] = 1
    with pytest.raises(ParseError) as err:
        from_canonical_json(json.dumps(payload).encode())
    assert "concepts[0].bogus" in str(err.value)


def test_map_hash_stable():
    assert map_hash(fixture_map()) == map_hash(fixture_map())


# ── edit operations ─────────────────────────────────────────────────

def test_rename_keeps_relations():
    s = stored()
    target = s.map.concepts[0]
    before_relations = [r.key() for r in s.map.relations]
    s2 = apply_edit(
        s,
        EditOp(
            EditOpType.RENAME_CONCEPT,
            {"id": target.id, "label": "separate chaining"},
        ),
    )
    assert s2.revision == 1
    renamed = s2.map.concept_by_id()[target.id]
    assert renamed.label == "separate chaining"
    assert [r.key() for r in s2.map.relations] == before_relations
    assert validate(s2.map) == []


def test_resize_donates_time_to_neighbor():
    s = stored()
    p1, p2 = s.map.propositions
    s2 = apply_edit(
        s,
        EditOp(
            EditOpType.RESIZE_PROPOSITION,
            {"id": p1.id, "edge": "end", "new_ms": 90_000},
        ),
    )
    q1, q2 = s2.map.propositions
    assert q1.end_ms == 90_000
    assert q2.start_ms == 90_000
    # Tiling-sum oracle: total always equals the video duration.
    assert sum(p.end_ms - p.start_ms for p in s2.map.propositions) == 120_000
    assert validate(s2.map) == []


def test_resize_rehomes_concepts():
    s = stored()
    p1, p2 = s.map.propositions
    # Pivot starts at 61 s; stretching p1 to 90 s captures it.
    s2 = apply_edit(
        s,
        EditOp(
            EditOpType.RESIZE_PROPOSITION,
            {"id": p1.id, "edge": "end", "new_ms": 90_000},
        ),
    )
    pivot = next(c for c in s2.map.concepts if c.label == "pivot")
    assert pivot.proposition_id == p1.id
    assert validate(s2.map) == []


def test_add_relation_duplicate_invalid():
    s = stored()
    assoc = next(
        r for r in s.map.relations if r.type is RelationType.ASSOCIATION
    )
    with pytest.raises(InvalidOp):
        apply_edit(
            s,
            EditOp(
                EditOpType.ADD_RELATION,
                {
                    "type": "association",
                    "src_id": assoc.src_id,
                    "dst_id": assoc.dst_id,
                },
            ),
        )
    assert s.revision == 0


def test_stale_revision_conflict():
    s = stored()
    op = EditOp(
        EditOpType.RENAME_CONCEPT,
        {"id": s.map.concepts[0].id, "label": "x"},
        expected_revision=5,
    )
    with pytest.raises(ConflictingRevision):
        apply_edit(s, op)


def test_delete_concept_cascades():
    s = stored()
    chaining = next(c for c in s.map.concepts if c.label == "chaining")
    s2 = apply_edit(s, EditOp(EditOpType.DELETE_CONCEPT, {"id": chaining.id}))
    labels = {c.label for c in s2.map.concepts}
    assert "chaining" not in labels
    assert "buckets" not in labels  # descendant cascaded
    for r in s2.map.relations:
        assert chaining.id not in (r.src_id, r.dst_id)
    assert validate(s2.map) == []


def test_delete_proposition_requires_cascade():
    s = stored()
    p1 = s.map.propositions[0]
    with pytest.raises(InvalidOp):
        apply_edit(s, EditOp(EditOpType.DELETE_PROPOSITION, {"id": p1.id}))
    s2 = apply_edit(
        s, EditOp(EditOpType.DELETE_PROPOSITION, {"id": p1.id, "cascade": True})
    )
    assert len(s2.map.propositions) == 1
    assert s2.map.propositions[0].start_ms == 0
    assert s2.map.propositions[0].end_ms == 120_000
    assert validate(s2.map) == []


def test_add_proposition_splits_host():
    s = stored()
    s2 = apply_edit(
        s,
        EditOp(
            EditOpType.ADD_PROPOSITION,
            {"title": "collision handling", "start_ms": 30_000, "end_ms": 50_000},
        ),
    )
    titles = [p.title for p in s2.map.propositions]
    assert titles == ["hash tables", "collision handling", "hash tables", "binary search"]
    assert [p.color_index for p in s2.map.propositions] == [0, 1, 2, 3]
    assert sum(p.end_ms - p.start_ms for p in s2.map.propositions) == 120_000
    assert validate(s2.map) == []


def test_reparent_concept():
    s = stored()
    chaining = next(c for c in s.map.concepts if c.label == "chaining")
    buckets = next(c for c in s.map.concepts if c.label == "buckets")
    s2 = apply_edit(
        s,
        EditOp(EditOpType.REPARENT_CONCEPT, {"id": buckets.id, "new_parent_id": None}),
    )
    moved = s2.map.concept_by_id()[buckets.id]
    assert moved.parent_id is None
    assert validate(s2.map) == []
    # And back again, which must restore a valid nested state.
    s3 = apply_edit(
        s2,
        EditOp(
            EditOpType.REPARENT_CONCEPT,
            {"id": buckets.id, "new_parent_id": chaining.id},
        ),
    )
    assert s3.map.concept_by_id()[buckets.id].parent_id == chaining.id
    assert validate(s3.map) == []


def test_invalid_op_leaves_map_unchanged():
    s = stored()
    blob = to_canonical_json(s.map)
    with pytest.raises(InvalidOp):
        apply_edit(s, EditOp(EditOpType.RENAME_CONCEPT, {"id": "ghost", "label": "x"}))
    assert to_canonical_json(s.map) == blob
    assert s.revision == 0


def test_manual_sequence_edge_rejected():
    s = stored()
    a, b = s.map.concepts[0].id, s.map.concepts[1].id
    with pytest.raises(InvalidOp):
        apply_edit(
            s,
            EditOp(
                EditOpType.ADD_RELATION,
                {"type": "sequence", "src_id": a, "dst_id": b},
            ),
        )


# ── random edit sequences keep every invariant ──────────────────────

OPS = [
    "rename",
    "add_concept",
    "delete_concept",
    "add_relation",
    "delete_relation",
    "resize",
    "reparent",
]


def _random_op(rng: random.Random, s: StoredMap) -> EditOp:
    cmap = s.map
    kind = rng.choice(OPS)
    concepts = cmap.concepts
    if kind == "rename" and concepts:
        c = rng.choice(concepts)
        return EditOp(
            EditOpType.RENAME_CONCEPT,
            {"id": c.id, "label": f"label{rng.randint(0, 999)}"},
        )
    if kind == "add_concept":
        prop = rng.choice(cmap.propositions)
        lo = rng.randrange(prop.start_ms, prop.end_ms - 1)
        hi = rng.randrange(lo + 1, prop.end_ms + 1)
        return EditOp(
            EditOpType.ADD_CONCEPT,
            {
                "proposition_id": prop.id,
                "label": f"new{rng.randint(0, 9999)}",
                "kind": "concept",
                "spans": [[lo, hi]],
            },
        )
    if kind == "delete_concept" and concepts:
        return EditOp(
            EditOpType.DELETE_CONCEPT, {"id": rng.choice(concepts).id}
        )
    if kind == "add_relation" and len(concepts) >= 2:
        a, b = rng.sample(concepts, 2)
        return EditOp(
            EditOpType.ADD_RELATION,
            {
                "type": rng.choice(["association", "similarity"]),
                "src_id": a.id,
                "dst_id": b.id,
            },
        )
    if kind == "delete_relation" and cmap.relations:
        r = rng.choice(cmap.relations)
        return EditOp(
            EditOpType.DELETE_RELATION,
            {"type": r.type.value, "src_id": r.src_id, "dst_id": r.dst_id},
        )
    if kind == "resize" and len(cmap.propositions) >= 2:
        idx = rng.randrange(len(cmap.propositions) - 1)
        p = cmap.propositions[idx]
        nxt = cmap.propositions[idx + 1]
        new_ms = rng.randrange(p.start_ms + 1, nxt.end_ms)
        return EditOp(
            EditOpType.RESIZE_PROPOSITION,
            {"id": p.id, "edge": "end", "new_ms": new_ms},
        )
    if kind == "reparent" and len(concepts) >= 2:
        a, b = rng.sample(concepts, 2)
        return EditOp(
            EditOpType.REPARENT_CONCEPT,
            {"id": a.id, "new_parent_id": b.id if rng.random() < 0.7 else None},
        )
    return EditOp(
        EditOpType.RENAME_CONCEPT, {"id": "nope", "label": "x"}
    )


def test_random_edit_sequences_never_invalidate():
    rng = random.Random(99)
    bad = 0
    for _ in range(300):
        s = stored()
        for _ in range(rng.randint(1, 5)):
            op = _random_op(rng, s)
            before = to_canonical_json(s.map)
            before_rev = s.revision
            try:
                s = apply_edit(s, op)
            except (InvalidOp, ConflictingRevision):
                bad += 1
                assert to_canonical_json(s.map) == before
                assert s.revision == before_rev
                continue
            assert validate(s.map) == [], f"op {op} broke the map"
            assert s.revision == before_rev + 1
    assert bad > 0  # the generator does produce rejects


# ── persistence ─────────────────────────────────────────────────────

def test_persist_and_load_round_trip(tmp_path):
    store = MapStore(tmp_path)
    s = stored()
    store.persist(s)
    loaded = store.load("v")
    assert loaded.revision == 0
    assert to_canonical_json(loaded.map) == to_canonical_json(s.map)


def test_edit_log_replay_reproduces_map(tmp_path):
    store = MapStore(tmp_path)
    s = stored()
    store.persist(s)
    s = apply_edit(
        s,
        EditOp(
            EditOpType.RENAME_CONCEPT,
            {"id": s.map.concepts[0].id, "label": "renamed"},
        ),
    )
    s = apply_edit(
        s,
        EditOp(
            EditOpType.ADD_RELATION,
            {
                "type": "association",
                "src_id": s.map.concepts[0].id,
                "dst_id": s.map.concepts[-1].id,
            },
        ),
    )
    store.persist(s)

    loaded = store.load("v")
    assert loaded.revision == 2
    assert to_canonical_json(loaded.map) == to_canonical_json(s.map)

    # Replay the log over the pipeline original: byte-identical result.
    original = from_canonical_json(store.original("v"))
    replayed = StoredMap(map=original, revision=0, edit_log=[])
    for op in loaded.edit_log:
        replayed = apply_edit(replayed, op)
    assert to_canonical_json(replayed.map) == to_canonical_json(s.map)


def test_load_unknown_video(tmp_path):
    with pytest.raises(UnknownVideo):
        MapStore(tmp_path).load("ghost")


def test_snapshot_plus_trailing_log_replay(tmp_path):
    store = MapStore(tmp_path)
    s0 = stored()
    store.persist(s0)
    s1 = apply_edit(
        s0,
        EditOp(
            EditOpType.RENAME_CONCEPT,
            {"id": s0.map.concepts[0].id, "label": "late"},
        ),
    )
    # Simulate a crash after the WAL write but before the snapshot: append
    # the log entry by hand against the revision-0 snapshot.
    vdir = store._video_dir("v")
    log = vdir / "log.jsonl"
    log.write_text(
        json.dumps({"revision": 1, "op": s1.edit_log[0].to_dict()}) + "\n",
        encoding="utf-8",
    )
    loaded = store.load("v")
    assert loaded.revision == 1
    assert to_canonical_json(loaded.map) == to_canonical_json(s1.map)
