"""Concept extraction inside one root proposition."""

from __future__ import annotations

from dataclasses import dataclass, field

from ctt.ingest.stemmer import porter_stem
from ctt.ingest.tokens import TokenStream
from ctt.keyphrase.phrases import Keyphrase
from ctt.conceptgraph.model import (
    Concept,
    ConceptKind,
    clip_spans,
    concept_id,
    merge_spans,
)
from ctt.segmentation.propositions import RootProposition
from ctt.segmentation.refine import title_overlap
from ctt.slidestruct.tree import SlideTree, SlideTreeNode


@dataclass(frozen=True)
class CueLexicons:
    """Phrase cues marking worked examples and knowledge checks."""

    example: tuple[str, ...] = ("for example", "for instance", "as an example")
    test: tuple[str, ...] = ("quiz", "test yourself", "exercise for you")


def _stems_of(label: str) -> tuple[str, ...]:
    words = [
        w
        for w in "".join(c if c.isalnum() else " " for c in label.lower()).split()
        if w
    ]
    return tuple(porter_stem(w) for w in words)


def _occurrence_spans(
    stream: TokenStream, stems: tuple[str, ...], lo: int, hi: int
) -> list[tuple[int, int]]:
    toks = stream.tokens
    k = len(stems)
    if k == 0:
        return []
    spans = []
    for i in range(len(toks) - k + 1):
        if toks[i].start_ms < lo or toks[i + k - 1].end_ms > hi:
            continue
        if all(toks[i + j].stem == stems[j] for j in range(k)):
            spans.append((toks[i].start_ms, toks[i + k - 1].end_ms))
    return spans


def _cue_hits(
    stream: TokenStream, cues: tuple[str, ...], lo: int, hi: int
) -> list[tuple[int, int, str]]:
    hits = []
    for cue in cues:
        stems = _stems_of(cue)
        for s, e in _occurrence_spans(stream, stems, lo, hi):
            hits.append((s, e, cue))
    hits.sort()
    return hits


def extract_concepts(
    prop: RootProposition,
    keyphrases: list[Keyphrase],
    stream: TokenStream,
    slide_tree: SlideTree | None = None,
    top_k: int = 5,
    theta_title: float = 0.5,
    cues: CueLexicons | None = None,
    min_child_span_ms: int = 2000,
) -> list[Concept]:
    """Extract this proposition's concepts.

    With a slide tree the concept-phrase nodes seed the concepts and
    slide labels win over matching transcript keyphrases; the slide
    hierarchy carries over as parent links.  Without slides the top-k
    keyphrases whose occurrences fall inside the proposition become a
    flat concept list.  Transcript cue phrases add example/test leaves
    under whichever concept covers them.
    """
    cues = cues or CueLexicons()
    lo, hi = prop.start_ms, prop.end_ms

    local_phrases: list[Keyphrase] = []
    for kp in keyphrases:
        occ = [o for o in kp.occurrences if lo <= o[0] and o[1] <= hi]
        if occ:
            local_phrases.append(
                Keyphrase(
                    text=kp.text,
                    score=kp.score,
                    occurrences=tuple(occ),
                    surface=kp.surface,
                )
            )

    concepts: list[Concept] = []
    if slide_tree is not None:
        concepts = _concepts_from_slides(
            prop, slide_tree, local_phrases, stream, theta_title
        )
    if not concepts:
        concepts = _concepts_from_keyphrases(prop, local_phrases, top_k)

    concepts.extend(
        _cue_concepts(prop, concepts, stream, cues, lo, hi, min_child_span_ms)
    )
    concepts.sort(key=lambda c: (c.first_start_ms, c.label))
    return concepts


def _concepts_from_keyphrases(
    prop: RootProposition, phrases: list[Keyphrase], top_k: int
) -> list[Concept]:
    ranked = sorted(phrases, key=lambda p: (-p.score, p.first_start_ms, p.text))
    # The proposition's own title phrase names the segment, not a nested
    # concept; skip it so children are informative.
    title_key = frozenset(_stems_of(prop.title))
    out = []
    for kp in ranked:
        if frozenset(kp.stems) == title_key:
            continue
        spans = merge_spans(list(kp.occurrences))
        if not spans:
            continue
        label = kp.surface or kp.text
        out.append(
            Concept(
                id=concept_id(prop.id, label, spans[0][0]),
                proposition_id=prop.id,
                label=label,
                kind=ConceptKind.CONCEPT,
                spans=spans,
                parent_id=None,
                stems=kp.stems,
            )
        )
        if len(out) >= top_k:
            break
    return out


def _concepts_from_slides(
    prop: RootProposition,
    slide_tree: SlideTree,
    phrases: list[Keyphrase],
    stream: TokenStream,
    theta_title: float,
) -> list[Concept]:
    lo, hi = prop.start_ms, prop.end_ms

    def clip(span: tuple[int, int]) -> tuple[int, int] | None:
        s, e = max(span[0], lo), min(span[1], hi)
        return (s, e) if e > s else None

    out: list[Concept] = []

    def visit(node: SlideTreeNode, parent: Concept | None) -> None:
        for child in node.children:
            concept = None
            if child.concept_phrase and child.text.strip():
                label = child.text.strip().rstrip("".join((":", ".", ",")))
                span = clip(child.span_ms)
                if span is not None:
                    stems = _stems_of(label)
                    spans = [span]
                    # A matching transcript keyphrase contributes its
                    # mention spans; the slide label still wins.
                    for kp in phrases:
                        if title_overlap(label, kp.surface or kp.text) >= theta_title:
                            spans.extend(o for o in kp.occurrences)
                    merged = merge_spans(spans)
                    if parent is not None:
                        merged = clip_spans(merged, parent.spans) or (span,)
                    concept = Concept(
                        id=concept_id(prop.id, label, merged[0][0]),
                        proposition_id=prop.id,
                        label=label,
                        kind=ConceptKind.CONCEPT,
                        spans=merged,
                        parent_id=parent.id if parent is not None else None,
                        stems=stems,
                    )
                    out.append(concept)
            visit(child, concept if concept is not None else parent)

    visit(slide_tree.root, None)
    return out


def _cue_concepts(
    prop: RootProposition,
    concepts: list[Concept],
    stream: TokenStream,
    cues: CueLexicons,
    lo: int,
    hi: int,
    min_span_ms: int,
) -> list[Concept]:
    out = []
    for kind, cue_list in (
        (ConceptKind.EXAMPLE, cues.example),
        (ConceptKind.TEST, cues.test),
    ):
        for s, e, cue in _cue_hits(stream, cue_list, lo, hi):
            span_end = max(e, min(s + min_span_ms, hi))
            parent = None
            for c in concepts:
                if c.kind is ConceptKind.CONCEPT and c.covers(s):
                    parent = c
                    break
            label = "example" if kind is ConceptKind.EXAMPLE else "test"
            span = (s, span_end)
            if parent is not None:
                clipped = clip_spans((span,), parent.spans)
                if clipped:
                    span = clipped[0]
            out.append(
                Concept(
                    id=concept_id(prop.id, f"{label}@{s}", s),
                    proposition_id=prop.id,
                    label=label,
                    kind=kind,
                    spans=(span,),
                    parent_id=parent.id if parent is not None else None,
                    stems=_stems_of(cue),
                )
            )
    return out
