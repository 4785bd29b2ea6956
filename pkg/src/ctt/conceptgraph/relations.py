"""Materializing the four relation types."""

from __future__ import annotations

from ctt.ingest.tokens import TokenStream
from ctt.conceptgraph.embeddings import EmbeddingTable, cosine_dense
from ctt.conceptgraph.model import Concept, ConceptKind, Relation, RelationType


def sequence_relations(concepts: list[Concept]) -> list[Relation]:
    """Chain time-adjacent siblings: n concepts yield n-1 edges.

    Callers pass one sibling group (same parent, same depth); the chain
    follows first-occurrence start times regardless of input order.
    """
    ordered = sorted(concepts, key=lambda c: (c.first_start_ms, c.label))
    edges = []
    for a, b in zip(ordered, ordered[1:]):
        edges.append(
            Relation(
                type=RelationType.SEQUENCE,
                src_id=a.id,
                dst_id=b.id,
                evidence={
                    "kind": "timestamps",
                    "src_start_ms": a.first_start_ms,
                    "dst_start_ms": b.first_start_ms,
                },
            )
        )
    return edges


def sequence_relations_by_group(concepts: list[Concept]) -> list[Relation]:
    """Sequence chains for every sibling group in a concept list."""
    groups: dict[tuple[str, str | None], list[Concept]] = {}
    for c in concepts:
        groups.setdefault((c.proposition_id, c.parent_id), []).append(c)
    edges: list[Relation] = []
    for key in sorted(groups, key=lambda k: (k[0], k[1] or "")):
        edges.extend(sequence_relations(groups[key]))
    return edges


def inclusion_relations(concepts: list[Concept]) -> list[Relation]:
    """One edge per parent-child link; the links must form a forest."""
    by_id = {c.id: c for c in concepts}
    edges = []
    for c in concepts:
        if c.parent_id is None:
            continue
        if c.parent_id not in by_id:
            raise ValueError(f"concept {c.id}: unknown parent {c.parent_id}")
        edges.append(
            Relation(
                type=RelationType.INCLUSION,
                src_id=c.parent_id,
                dst_id=c.id,
                evidence={"kind": "tree_edge"},
            )
        )
    _assert_acyclic(concepts)
    return edges


def _assert_acyclic(concepts: list[Concept]) -> None:
    by_id = {c.id: c for c in concepts}
    for c in concepts:
        seen = {c.id}
        cur = c.parent_id
        while cur is not None:
            if cur in seen:
                raise ValueError(f"inclusion cycle through {cur}")
            seen.add(cur)
            parent = by_id.get(cur)
            cur = parent.parent_id if parent else None


def similarity_relations(
    concepts: list[Concept],
    table: EmbeddingTable,
    theta_sim: float = 0.7,
) -> list[Relation]:
    """Undirected edges between concepts with close label embeddings.

    Labels embed as the average of their member-stem vectors; concepts
    with no in-vocabulary stems are skipped.  Each edge is stored once
    with endpoints in canonical (sorted id) order and carries the cosine.
    """
    nodes = [c for c in concepts if c.kind is ConceptKind.CONCEPT]
    vecs: dict[str, tuple[float, ...]] = {}
    for c in nodes:
        v = table.phrase_vector(c.stems)
        if v is not None:
            vecs[c.id] = v

    edges = []
    ordered = sorted(vecs)
    for i, a in enumerate(ordered):
        for b in ordered[i + 1 :]:
            sim = cosine_dense(vecs[a], vecs[b])
            if sim >= theta_sim:
                edges.append(
                    Relation(
                        type=RelationType.SIMILARITY,
                        src_id=a,
                        dst_id=b,
                        evidence={"kind": "cosine", "cosine": sim},
                    )
                )
    return edges


def association_relations(
    concepts: list[Concept], stream: TokenStream
) -> list[Relation]:
    """Directed container-to-mentioned edges from cross-mentions.

    A mention of concept B's label inside one of concept A's spans makes
    an A→B edge, unless B's own spans cover that instant (a concept is
    not "mentioned elsewhere" while it is being taught).  Evidence pins
    the mention offset so the edge can be re-checked against the stream.
    """
    nodes = [c for c in concepts if c.kind is ConceptKind.CONCEPT and c.stems]
    toks = stream.tokens
    edges: dict[tuple[str, str], Relation] = {}
    for b in nodes:
        k = len(b.stems)
        if k == 0:
            continue
        for i in range(len(toks) - k + 1):
            if not all(toks[i + j].stem == b.stems[j] for j in range(k)):
                continue
            at_ms = toks[i].start_ms
            if b.covers(at_ms):
                continue
            for a in nodes:
                if a.id == b.id or not a.covers(at_ms):
                    continue
                key = (a.id, b.id)
                if key not in edges:
                    edges[key] = Relation(
                        type=RelationType.ASSOCIATION,
                        src_id=a.id,
                        dst_id=b.id,
                        evidence={
                            "kind": "mention",
                            "at_ms": at_ms,
                            "stems": list(b.stems),
                        },
                    )
    return [edges[k] for k in sorted(edges)]
