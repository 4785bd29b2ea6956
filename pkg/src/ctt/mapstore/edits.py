"""Edit operations over stored concept maps.

Every edit is atomic: it is applied to a copy, the result is validated,
and only a fully valid map becomes the next revision.  Sequence chains
and inclusion edges are derived state (they mirror sibling order and
parent links), so structural edits rebuild them rather than trusting
callers to keep them consistent.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field, replace
from enum import Enum

from ctt.errors import ConflictingRevision, InvalidOp
from ctt.conceptgraph.model import (
    Concept,
    ConceptKind,
    ConceptMap,
    Relation,
    RelationType,
    concept_id,
    merge_spans,
)
from ctt.conceptgraph.relations import (
    inclusion_relations,
    sequence_relations_by_group,
)
from ctt.mapstore.validate import validate
from ctt.segmentation.propositions import (
    PropositionSource,
    RootProposition,
    proposition_id,
)


class EditOpType(Enum):
    ADD_PROPOSITION = "add_proposition"
    RESIZE_PROPOSITION = "resize_proposition"
    DELETE_PROPOSITION = "delete_proposition"
    ADD_CONCEPT = "add_concept"
    DELETE_CONCEPT = "delete_concept"
    RENAME_CONCEPT = "rename_concept"
    ADD_RELATION = "add_relation"
    DELETE_RELATION = "delete_relation"
    REPARENT_CONCEPT = "reparent_concept"


@dataclass(frozen=True)
class EditOp:
    op: EditOpType
    payload: dict
    author: str = ""
    timestamp_ms: int = 0
    expected_revision: int | None = None

    def to_dict(self) -> dict:
        return {
            "op": self.op.value,
            "payload": self.payload,
            "author": self.author,
            "timestamp_ms": self.timestamp_ms,
            "expected_revision": self.expected_revision,
        }

    @staticmethod
    def from_dict(raw: dict) -> "EditOp":
        return EditOp(
            op=EditOpType(raw["op"]),
            payload=dict(raw.get("payload", {})),
            author=str(raw.get("author", "")),
            timestamp_ms=int(raw.get("timestamp_ms", 0)),
            expected_revision=(
                int(raw["expected_revision"])
                if raw.get("expected_revision") is not None
                else None
            ),
        )


@dataclass
class StoredMap:
    map: ConceptMap
    revision: int = 0
    edit_log: list[EditOp] = field(default_factory=list)


def apply_edit(stored: StoredMap, op: EditOp) -> StoredMap:
    """Apply one edit, returning the next revision.

    Raises ConflictingRevision on a stale ``expected_revision`` and
    InvalidOp when preconditions fail; the input is never mutated.
    """
    if op.expected_revision is not None and op.expected_revision != stored.revision:
        raise ConflictingRevision(
            f"expected revision {op.expected_revision}, store at {stored.revision}"
        )

    cmap = copy.deepcopy(stored.map)
    handler = _HANDLERS.get(op.op)
    if handler is None:
        raise InvalidOp(f"unknown op {op.op!r}")
    cmap = handler(cmap, op.payload)
    cmap = _rederive(cmap)

    violations = validate(cmap)
    if violations:
        first = violations[0]
        raise InvalidOp(f"edit breaks {first.rule} on {first.entity}: {first.message}")

    return StoredMap(
        map=cmap,
        revision=stored.revision + 1,
        edit_log=list(stored.edit_log) + [op],
    )


# ── shared helpers ──────────────────────────────────────────────────


def _rederive(cmap: ConceptMap) -> ConceptMap:
    """Rebuild derived state: structural edges and sub-distributions."""
    kept = [
        r
        for r in cmap.relations
        if r.type in (RelationType.ASSOCIATION, RelationType.SIMILARITY)
    ]
    ids = {c.id for c in cmap.concepts}
    kept = [r for r in kept if r.src_id in ids and r.dst_id in ids]
    relations = kept + inclusion_relations(cmap.concepts)
    relations += sequence_relations_by_group(cmap.concepts)
    relations = sorted(relations, key=lambda r: r.key())

    by_parent: dict[str, list[Concept]] = {}
    for c in cmap.concepts:
        if c.parent_id is not None:
            by_parent.setdefault(c.parent_id, []).append(c)
    concepts = []
    for c in sorted(cmap.concepts, key=lambda c: (c.first_start_ms, c.label, c.id)):
        children = sorted(
            by_parent.get(c.id, []), key=lambda ch: (ch.first_start_ms, ch.label)
        )
        concepts.append(
            replace(
                c,
                sub_distribution=tuple(
                    (ch.id, ch.total_span_ms, ch.importance) for ch in children
                ),
            )
        )
    return ConceptMap(
        video_id=cmap.video_id,
        duration_ms=cmap.duration_ms,
        propositions=sorted(cmap.propositions, key=lambda p: p.start_ms),
        concepts=concepts,
        relations=relations,
        provenance=cmap.provenance,
    )


def _recolor(props: list[RootProposition]) -> list[RootProposition]:
    ordered = sorted(props, key=lambda p: p.start_ms)
    return [replace(p, color_index=i) for i, p in enumerate(ordered)]


def _rehome_concepts(cmap: ConceptMap) -> ConceptMap:
    """Re-home every concept to the proposition covering its first start.

    After a boundary edit a child can land in a different proposition
    than its parent; such children detach and become top level, which
    keeps the forest invariants intact.
    """
    props = sorted(cmap.propositions, key=lambda p: p.start_ms)

    def owner(at_ms: int) -> str:
        for p in props:
            if p.start_ms <= at_ms < p.end_ms:
                return p.id
        return props[-1].id if at_ms >= props[-1].end_ms else props[0].id

    moved: dict[str, Concept] = {}
    for c in cmap.concepts:
        prop = owner(c.first_start_ms)
        moved[c.id] = replace(c, proposition_id=prop) if prop != c.proposition_id else c
    detached = []
    for c in moved.values():
        if c.parent_id is not None:
            parent = moved.get(c.parent_id)
            if parent is None or parent.proposition_id != c.proposition_id:
                c = replace(c, parent_id=None)
        detached.append(c)
    return cmap.with_concepts(detached)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise InvalidOp(message)


# ── proposition ops ─────────────────────────────────────────────────


def _add_proposition(cmap: ConceptMap, payload: dict) -> ConceptMap:
    title = str(payload.get("title", "")).strip()
    _require(bool(title), "add_proposition: empty title")
    try:
        start = int(payload["start_ms"])
        end = int(payload["end_ms"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidOp(f"add_proposition: bad span: {exc}") from exc
    _require(start < end, "add_proposition: start >= end")

    host = None
    for p in cmap.propositions:
        if p.start_ms <= start and end <= p.end_ms:
            host = p
            break
    _require(host is not None, "add_proposition: span crosses proposition edges")

    parts: list[RootProposition] = []
    if start > host.start_ms:
        parts.append(replace(host, end_ms=start))
    parts.append(
        RootProposition(
            id=proposition_id(cmap.video_id, title, start),
            title=title,
            start_ms=start,
            end_ms=end,
            color_index=0,
            source=PropositionSource.USER_EDITED,
        )
    )
    if end < host.end_ms:
        right = replace(
            host,
            id=proposition_id(cmap.video_id, host.title, end),
            start_ms=end,
        )
        parts.append(right)

    props = [p for p in cmap.propositions if p.id != host.id] + parts
    cmap.propositions = _recolor(props)
    return _rehome_concepts(cmap)


def _resize_proposition(cmap: ConceptMap, payload: dict) -> ConceptMap:
    pid = str(payload.get("id", ""))
    edge = str(payload.get("edge", ""))
    _require(edge in ("start", "end"), "resize_proposition: edge must be start|end")
    try:
        new_ms = int(payload["new_ms"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidOp(f"resize_proposition: bad new_ms: {exc}") from exc

    props = sorted(cmap.propositions, key=lambda p: p.start_ms)
    idx = next((i for i, p in enumerate(props) if p.id == pid), None)
    _require(idx is not None, f"resize_proposition: unknown id {pid}")
    target = props[idx]

    if edge == "start":
        _require(idx > 0, "resize_proposition: cannot move the video start")
        neighbor = props[idx - 1]
        _require(
            neighbor.start_ms < new_ms < target.end_ms,
            "resize_proposition: new start collapses a proposition",
        )
        props[idx - 1] = replace(neighbor, end_ms=new_ms)
        props[idx] = replace(target, start_ms=new_ms)
    else:
        _require(
            idx < len(props) - 1, "resize_proposition: cannot move the video end"
        )
        neighbor = props[idx + 1]
        _require(
            target.start_ms < new_ms < neighbor.end_ms,
            "resize_proposition: new end collapses a proposition",
        )
        props[idx] = replace(target, end_ms=new_ms)
        props[idx + 1] = replace(neighbor, start_ms=new_ms)

    cmap.propositions = _recolor(props)
    return _rehome_concepts(cmap)


def _delete_proposition(cmap: ConceptMap, payload: dict) -> ConceptMap:
    pid = str(payload.get("id", ""))
    cascade = bool(payload.get("cascade", False))
    props = sorted(cmap.propositions, key=lambda p: p.start_ms)
    _require(len(props) > 1, "delete_proposition: cannot delete the only proposition")
    idx = next((i for i, p in enumerate(props) if p.id == pid), None)
    _require(idx is not None, f"delete_proposition: unknown id {pid}")

    owned = [c for c in cmap.concepts if c.proposition_id == pid]
    if owned and not cascade:
        raise InvalidOp(
            f"delete_proposition: {len(owned)} concepts present; pass cascade"
        )

    target = props[idx]
    if idx > 0:
        props[idx - 1] = replace(props[idx - 1], end_ms=target.end_ms)
    else:
        props[idx + 1] = replace(props[idx + 1], start_ms=target.start_ms)
    del props[idx]
    cmap.propositions = _recolor(props)

    doomed = {c.id for c in owned}
    cmap.concepts = [c for c in cmap.concepts if c.id not in doomed]
    cmap.concepts = [
        replace(c, parent_id=None) if c.parent_id in doomed else c
        for c in cmap.concepts
    ]
    return _rehome_concepts(cmap)


# ── concept ops ─────────────────────────────────────────────────────


def _add_concept(cmap: ConceptMap, payload: dict) -> ConceptMap:
    label = str(payload.get("label", "")).strip()
    _require(bool(label), "add_concept: empty label")
    pid = str(payload.get("proposition_id", ""))
    _require(
        any(p.id == pid for p in cmap.propositions),
        f"add_concept: unknown proposition {pid}",
    )
    kind_raw = str(payload.get("kind", "concept"))
    try:
        kind = ConceptKind(kind_raw)
    except ValueError as exc:
        raise InvalidOp(f"add_concept: bad kind {kind_raw!r}") from exc
    _require(kind is not ConceptKind.PROPOSITION, "add_concept: kind proposition")
    try:
        spans = merge_spans([(int(s), int(e)) for s, e in payload.get("spans", [])])
    except (TypeError, ValueError) as exc:
        raise InvalidOp(f"add_concept: bad spans: {exc}") from exc
    _require(bool(spans), "add_concept: no spans")

    parent_id = payload.get("parent_id")
    by_id = cmap.concept_by_id()
    if parent_id is not None:
        parent = by_id.get(str(parent_id))
        _require(parent is not None, f"add_concept: unknown parent {parent_id}")
        _require(
            parent.kind is ConceptKind.CONCEPT,
            "add_concept: example/test nodes cannot have children",
        )
        _require(
            parent.proposition_id == pid,
            "add_concept: parent in a different proposition",
        )
        for span in spans:
            _require(
                parent.covers_span(span),
                f"add_concept: span {span} not covered by parent",
            )

    cid = concept_id(pid, label, spans[0][0])
    _require(cid not in by_id, "add_concept: identical concept exists")
    cmap.concepts.append(
        Concept(
            id=cid,
            proposition_id=pid,
            label=label,
            kind=kind,
            spans=spans,
            parent_id=str(parent_id) if parent_id is not None else None,
            stems=tuple(str(s) for s in payload.get("stems", [])),
        )
    )
    return cmap


def _delete_concept(cmap: ConceptMap, payload: dict) -> ConceptMap:
    cid = str(payload.get("id", ""))
    by_id = cmap.concept_by_id()
    _require(cid in by_id, f"delete_concept: unknown id {cid}")

    doomed = {cid}
    changed = True
    while changed:
        changed = False
        for c in cmap.concepts:
            if c.id not in doomed and c.parent_id in doomed:
                doomed.add(c.id)
                changed = True
    cmap.concepts = [c for c in cmap.concepts if c.id not in doomed]
    cmap.relations = [
        r
        for r in cmap.relations
        if r.src_id not in doomed and r.dst_id not in doomed
    ]
    return cmap


def _rename_concept(cmap: ConceptMap, payload: dict) -> ConceptMap:
    cid = str(payload.get("id", ""))
    label = str(payload.get("label", "")).strip()
    _require(bool(label), "rename_concept: empty label")
    found = False
    for i, c in enumerate(cmap.concepts):
        if c.id == cid:
            cmap.concepts[i] = replace(c, label=label)
            found = True
            break
    _require(found, f"rename_concept: unknown id {cid}")
    return cmap


def _reparent_concept(cmap: ConceptMap, payload: dict) -> ConceptMap:
    cid = str(payload.get("id", ""))
    new_parent = payload.get("new_parent_id")
    by_id = cmap.concept_by_id()
    child = by_id.get(cid)
    _require(child is not None, f"reparent_concept: unknown id {cid}")

    if new_parent is not None:
        parent = by_id.get(str(new_parent))
        _require(parent is not None, f"reparent_concept: unknown parent {new_parent}")
        _require(parent.id != cid, "reparent_concept: self parent")
        _require(
            parent.kind is ConceptKind.CONCEPT,
            "reparent_concept: example/test nodes cannot have children",
        )
        _require(
            parent.proposition_id == child.proposition_id,
            "reparent_concept: parent in a different proposition",
        )
        cur = parent
        while cur.parent_id is not None:
            _require(cur.parent_id != cid, "reparent_concept: would create a cycle")
            cur = by_id[cur.parent_id]
        for span in child.spans:
            _require(
                parent.covers_span(span),
                f"reparent_concept: span {span} not covered by new parent",
            )
    cmap.concepts = [
        replace(c, parent_id=str(new_parent) if new_parent is not None else None)
        if c.id == cid
        else c
        for c in cmap.concepts
    ]
    return cmap


# ── relation ops ────────────────────────────────────────────────────

_EDITABLE_RELATIONS = (RelationType.ASSOCIATION, RelationType.SIMILARITY)


def _add_relation(cmap: ConceptMap, payload: dict) -> ConceptMap:
    try:
        rtype = RelationType(str(payload.get("type", "")))
    except ValueError as exc:
        raise InvalidOp(f"add_relation: bad type: {exc}") from exc
    _require(
        rtype in _EDITABLE_RELATIONS,
        "add_relation: sequence/inclusion edges are derived, use reparent",
    )
    src = str(payload.get("src_id", ""))
    dst = str(payload.get("dst_id", ""))
    by_id = cmap.concept_by_id()
    _require(src in by_id and dst in by_id, "add_relation: unknown endpoint")
    _require(src != dst, "add_relation: self relation")

    if rtype is RelationType.SIMILARITY:
        src, dst = sorted((src, dst))
        evidence = {"kind": "user_asserted", "cosine": 1.0}
    else:
        evidence = {"kind": "user_asserted"}
    rel = Relation(type=rtype, src_id=src, dst_id=dst, evidence=evidence)
    _require(
        rel.key() not in {r.key() for r in cmap.relations},
        "add_relation: duplicate edge",
    )
    cmap.relations.append(rel)
    return cmap


def _delete_relation(cmap: ConceptMap, payload: dict) -> ConceptMap:
    try:
        rtype = RelationType(str(payload.get("type", "")))
    except ValueError as exc:
        raise InvalidOp(f"delete_relation: bad type: {exc}") from exc
    _require(
        rtype in _EDITABLE_RELATIONS,
        "delete_relation: sequence/inclusion edges are derived, use reparent",
    )
    src = str(payload.get("src_id", ""))
    dst = str(payload.get("dst_id", ""))
    if rtype is RelationType.SIMILARITY:
        src, dst = sorted((src, dst))
    key = (rtype.value, src, dst)
    before = len(cmap.relations)
    cmap.relations = [r for r in cmap.relations if r.key() != key]
    _require(len(cmap.relations) < before, "delete_relation: no such edge")
    return cmap


_HANDLERS = {
    EditOpType.ADD_PROPOSITION: _add_proposition,
    EditOpType.RESIZE_PROPOSITION: _resize_proposition,
    EditOpType.DELETE_PROPOSITION: _delete_proposition,
    EditOpType.ADD_CONCEPT: _add_concept,
    EditOpType.DELETE_CONCEPT: _delete_concept,
    EditOpType.RENAME_CONCEPT: _rename_concept,
    EditOpType.ADD_RELATION: _add_relation,
    EditOpType.DELETE_RELATION: _delete_relation,
    EditOpType.REPARENT_CONCEPT: _reparent_concept,
}
