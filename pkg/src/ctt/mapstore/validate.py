"""Structural validation of concept maps."""

from __future__ import annotations

from dataclasses import dataclass

from ctt.conceptgraph.model import ConceptKind, ConceptMap, RelationType


@dataclass(frozen=True)
class Violation:
    entity: str
    rule: str
    message: str


def validate(cmap: ConceptMap) -> list[Violation]:
    """Check every structural invariant; an empty list means valid."""
    out: list[Violation] = []
    out.extend(_check_propositions(cmap))
    out.extend(_check_concepts(cmap))
    out.extend(_check_relations(cmap))
    return out


def _check_propositions(cmap: ConceptMap) -> list[Violation]:
    out = []
    props = cmap.propositions
    if not props:
        out.append(Violation("map", "propositions", "no propositions"))
        return out
    for p in props:
        if not p.title.strip():
            out.append(Violation(p.id, "title", "empty title"))
        if p.start_ms >= p.end_ms:
            out.append(Violation(p.id, "span", "non-positive span"))
    ordered = sorted(props, key=lambda p: p.start_ms)
    if [p.id for p in ordered] != [p.id for p in props]:
        out.append(Violation("map", "prop_order", "propositions not time-sorted"))
    if ordered[0].start_ms != 0:
        out.append(
            Violation(ordered[0].id, "tiling", "first proposition not at 0")
        )
    if ordered[-1].end_ms != cmap.duration_ms:
        out.append(
            Violation(
                ordered[-1].id, "tiling", "last proposition not at duration"
            )
        )
    for a, b in zip(ordered, ordered[1:]):
        if a.end_ms != b.start_ms:
            out.append(
                Violation(
                    b.id, "tiling", f"gap or overlap at {a.end_ms}..{b.start_ms}"
                )
            )
    for i, p in enumerate(props):
        if p.color_index != i:
            out.append(
                Violation(p.id, "color", f"color_index {p.color_index}, want {i}")
            )
    return out


def _check_concepts(cmap: ConceptMap) -> list[Violation]:
    out = []
    prop_ids = {p.id for p in cmap.propositions}
    by_id = cmap.concept_by_id()
    if len(by_id) != len(cmap.concepts):
        out.append(Violation("map", "concept_ids", "duplicate concept ids"))

    for c in cmap.concepts:
        if c.proposition_id not in prop_ids:
            out.append(
                Violation(c.id, "proposition", f"unknown {c.proposition_id}")
            )
        if not c.spans:
            out.append(Violation(c.id, "spans", "no spans"))
        for s, e in c.spans:
            if s >= e:
                out.append(Violation(c.id, "spans", f"empty span {s}..{e}"))
        for (s1, e1), (s2, e2) in zip(c.spans, c.spans[1:]):
            if s2 < e1:
                out.append(Violation(c.id, "spans", "spans overlap or unsorted"))
        if not 0.0 <= c.importance <= 1.0:
            out.append(Violation(c.id, "importance", f"{c.importance} outside [0,1]"))
        if c.parent_id is not None:
            parent = by_id.get(c.parent_id)
            if parent is None:
                out.append(Violation(c.id, "parent", f"unknown {c.parent_id}"))
                continue
            if parent.kind in (ConceptKind.EXAMPLE, ConceptKind.TEST):
                out.append(
                    Violation(c.id, "leaf", "example/test nodes cannot have children")
                )
            if parent.proposition_id != c.proposition_id:
                out.append(
                    Violation(c.id, "parent", "parent in a different proposition")
                )
            for span in c.spans:
                if not parent.covers_span(span):
                    out.append(
                        Violation(
                            c.id,
                            "coverage",
                            f"span {span} not covered by parent {parent.id}",
                        )
                    )
        for cid, _, _ in c.sub_distribution:
            child = by_id.get(cid)
            if child is None or child.parent_id != c.id:
                out.append(
                    Violation(c.id, "sub_distribution", f"{cid} is not a child")
                )

    # Parent links must form a forest.
    for c in cmap.concepts:
        seen = {c.id}
        cur = c.parent_id
        while cur is not None:
            if cur in seen:
                out.append(Violation(c.id, "cycle", f"inclusion cycle via {cur}"))
                break
            seen.add(cur)
            node = by_id.get(cur)
            cur = node.parent_id if node else None
    return out


def _check_relations(cmap: ConceptMap) -> list[Violation]:
    out = []
    by_id = cmap.concept_by_id()
    seen_keys = set()
    for r in cmap.relations:
        key = r.key()
        if key in seen_keys:
            out.append(Violation(str(key), "duplicate", "duplicate relation"))
        seen_keys.add(key)
        if r.src_id == r.dst_id:
            out.append(Violation(str(key), "self", "self relation"))
        if r.src_id not in by_id or r.dst_id not in by_id:
            out.append(Violation(str(key), "endpoint", "unknown endpoint"))

    # Inclusion edges mirror the parent links exactly.
    want_inclusion = {
        (c.parent_id, c.id) for c in cmap.concepts if c.parent_id is not None
    }
    got_inclusion = {
        (r.src_id, r.dst_id)
        for r in cmap.relations
        if r.type is RelationType.INCLUSION
    }
    for edge in got_inclusion - want_inclusion:
        out.append(Violation(str(edge), "inclusion", "edge without parent link"))
    for edge in want_inclusion - got_inclusion:
        out.append(Violation(str(edge), "inclusion", "parent link without edge"))

    # Similarity: canonical endpoint order, cosine in [0, 1].
    for r in cmap.relations:
        if r.type is RelationType.SIMILARITY:
            if r.src_id > r.dst_id:
                out.append(
                    Violation(str(r.key()), "similarity", "endpoints not canonical")
                )
            cos = r.evidence.get("cosine")
            if cos is None or not 0.0 <= float(cos) <= 1.0:
                out.append(
                    Violation(str(r.key()), "similarity", f"bad cosine {cos!r}")
                )

    # Sequence edges: exactly one start-time path per sibling group.
    groups: dict[tuple[str, str | None], list] = {}
    for c in cmap.concepts:
        groups.setdefault((c.proposition_id, c.parent_id), []).append(c)
    want_sequence = set()
    for members in groups.values():
        ordered = sorted(members, key=lambda c: (c.first_start_ms, c.label))
        for a, b in zip(ordered, ordered[1:]):
            want_sequence.add((a.id, b.id))
    got_sequence = {
        (r.src_id, r.dst_id)
        for r in cmap.relations
        if r.type is RelationType.SEQUENCE
    }
    for edge in got_sequence - want_sequence:
        out.append(Violation(str(edge), "sequence", "edge off the sibling chain"))
    for edge in want_sequence - got_sequence:
        out.append(Violation(str(edge), "sequence", "missing chain edge"))
    return out
