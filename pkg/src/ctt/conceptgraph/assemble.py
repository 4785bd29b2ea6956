"""Deterministic concept-map assembly."""

from __future__ import annotations

from ctt.conceptgraph.model import Concept, ConceptMap, Provenance, Relation
from ctt.segmentation.propositions import RootProposition


def assemble_concept_map(
    video_id: str,
    duration_ms: int,
    propositions: list[RootProposition],
    concepts: list[Concept],
    relations: list[Relation],
    provenance: Provenance,
) -> ConceptMap:
    """Order everything canonically and drop duplicate relations.

    Propositions sort by time, concepts by (first start, label), and
    relations by (type, src, dst); identical inputs therefore always
    produce an identical map.
    """
    props = sorted(propositions, key=lambda p: p.start_ms)
    nodes = sorted(concepts, key=lambda c: (c.first_start_ms, c.label, c.id))
    seen: set[tuple[str, str, str]] = set()
    edges: list[Relation] = []
    for r in sorted(relations, key=lambda r: r.key()):
        if r.key() in seen:
            continue
        seen.add(r.key())
        edges.append(r)
    return ConceptMap(
        video_id=video_id,
        duration_ms=duration_ms,
        propositions=props,
        concepts=nodes,
        relations=edges,
        provenance=provenance,
    )
