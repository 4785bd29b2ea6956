"""Concept-map data model: nodes, typed edges, and the assembled map."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace
from enum import Enum

from ctt.segmentation.propositions import RootProposition


class ConceptKind(Enum):
    PROPOSITION = "proposition"
    CONCEPT = "concept"
    EXAMPLE = "example"
    TEST = "test"


class RelationType(Enum):
    SEQUENCE = "sequence"
    INCLUSION = "inclusion"
    ASSOCIATION = "association"
    SIMILARITY = "similarity"


def concept_id(proposition_id: str, label: str, first_start_ms: int) -> str:
    digest = hashlib.sha1(
        f"{proposition_id}\x1f{label}\x1f{first_start_ms}".encode("utf-8")
    ).hexdigest()
    return f"c_{digest[:16]}"


@dataclass(frozen=True)
class Concept:
    """A knowledge unit nested under a root proposition.

    Spans are sorted and non-overlapping; a parent's spans cover every
    child span.  Example and test nodes are always leaves.
    """

    id: str
    proposition_id: str
    label: str
    kind: ConceptKind
    spans: tuple[tuple[int, int], ...]
    parent_id: str | None = None
    stems: tuple[str, ...] = ()
    importance: float = 0.0
    style_durations: dict[str, int] = field(default_factory=dict)
    sub_distribution: tuple[tuple[str, int, float], ...] = ()

    @property
    def first_start_ms(self) -> int:
        return self.spans[0][0] if self.spans else 0

    @property
    def total_span_ms(self) -> int:
        return sum(e - s for s, e in self.spans)

    def covers(self, instant_ms: int) -> bool:
        return any(s <= instant_ms < e for s, e in self.spans)

    def covers_span(self, span: tuple[int, int]) -> bool:
        return any(s <= span[0] and span[1] <= e for s, e in self.spans)


@dataclass(frozen=True)
class Relation:
    """A typed edge; evidence makes every edge re-checkable from inputs."""

    type: RelationType
    src_id: str
    dst_id: str
    evidence: dict = field(default_factory=dict)

    def key(self) -> tuple[str, str, str]:
        return (self.type.value, self.src_id, self.dst_id)


@dataclass(frozen=True)
class Provenance:
    pipeline_version: str
    config_hash: str
    llm_used: bool = False


@dataclass
class ConceptMap:
    video_id: str
    duration_ms: int
    propositions: list[RootProposition]
    concepts: list[Concept]
    relations: list[Relation]
    provenance: Provenance

    def concept_by_id(self) -> dict[str, Concept]:
        return {c.id: c for c in self.concepts}

    def children_of(self, parent_id: str | None, proposition_id: str) -> list[Concept]:
        return [
            c
            for c in self.concepts
            if c.parent_id == parent_id and c.proposition_id == proposition_id
        ]

    def with_concepts(self, concepts: list[Concept]) -> "ConceptMap":
        return ConceptMap(
            video_id=self.video_id,
            duration_ms=self.duration_ms,
            propositions=list(self.propositions),
            concepts=concepts,
            relations=list(self.relations),
            provenance=self.provenance,
        )


def merge_spans(spans: list[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    """Sort and coalesce overlapping or touching spans."""
    out: list[list[int]] = []
    for s, e in sorted(spans):
        if e <= s:
            continue
        if out and s <= out[-1][1]:
            out[-1][1] = max(out[-1][1], e)
        else:
            out.append([s, e])
    return tuple((s, e) for s, e in out)


def clip_spans(
    spans: tuple[tuple[int, int], ...], cover: tuple[tuple[int, int], ...]
) -> tuple[tuple[int, int], ...]:
    """Intersect spans with a covering span set."""
    clipped = []
    for s, e in spans:
        for cs, ce in cover:
            lo, hi = max(s, cs), min(e, ce)
            if hi > lo:
                clipped.append((lo, hi))
    return merge_spans(clipped)


def reassign_concept_id(concept: Concept) -> Concept:
    return replace(
        concept,
        id=concept_id(concept.proposition_id, concept.label, concept.first_start_ms),
    )
