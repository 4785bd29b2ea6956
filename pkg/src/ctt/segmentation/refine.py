"""Slide-title refinement of proposition boundaries and labels."""

from __future__ import annotations

from dataclasses import dataclass, replace

from ctt.ingest.stemmer import porter_stem
from ctt.segmentation.propositions import (
    PropositionSource,
    RootProposition,
    proposition_id,
)


@dataclass(frozen=True)
class TitleGroup:
    title: str
    start_ms: int
    end_ms: int


def _stem_set(title: str, stopwords: frozenset[str] | None = None) -> frozenset[str]:
    words = [w for w in "".join(
        c if c.isalnum() else " " for c in title.lower()
    ).split() if w]
    if stopwords:
        words = [w for w in words if w not in stopwords]
    return frozenset(porter_stem(w) for w in words)


def title_overlap(
    a: str, b: str, stopwords: frozenset[str] | None = None
) -> float:
    """Word overlap of two titles: Jaccard over stemmed content words."""
    sa, sb = _stem_set(a, stopwords), _stem_set(b, stopwords)
    if not sa and not sb:
        return 1.0
    union = sa | sb
    if not union:
        return 0.0
    return len(sa & sb) / len(union)


def group_slide_titles(
    titles: list[tuple[str, int, int]],
    theta_title: float = 0.5,
    stopwords: frozenset[str] | None = None,
) -> list[TitleGroup]:
    """Merge time-adjacent slide titles whose word overlap reaches theta.

    Consecutive slides belonging to one topic usually share title terms;
    the group keeps the first slide's title and the union of the time
    range.
    """
    groups: list[TitleGroup] = []
    for title, start, end in sorted(titles, key=lambda t: t[1]):
        if groups and title_overlap(groups[-1].title, title, stopwords) >= theta_title:
            prev = groups[-1]
            groups[-1] = TitleGroup(prev.title, prev.start_ms, max(prev.end_ms, end))
        else:
            groups.append(TitleGroup(title, start, end))
    return groups


def refine_with_slide_titles(
    props: list[RootProposition],
    title_groups: list[TitleGroup],
    snap_tolerance_ms: int = 10_000,
    theta_title: float = 0.5,
    stopwords: frozenset[str] | None = None,
    video_id: str = "",
) -> list[RootProposition]:
    """Snap proposition boundaries to slide-title-group boundaries.

    Interior boundaries move to the nearest group boundary within
    ``snap_tolerance_ms``.  When the overlapping group's title words
    cover at least ``theta_title`` of the proposition title, the slide
    title replaces it and the source flips to slide-assisted.  The outer
    video extent never moves, so the tiling invariant is preserved.
    """
    if not props or not title_groups:
        return props

    group_edges = sorted(
        {g.start_ms for g in title_groups} | {g.end_ms for g in title_groups}
    )

    # Interior boundary k sits between props[k] and props[k+1].
    edges = [p.start_ms for p in props] + [props[-1].end_ms]
    for k in range(1, len(edges) - 1):
        nearest = min(group_edges, key=lambda e: abs(e - edges[k]))
        if abs(nearest - edges[k]) <= snap_tolerance_ms:
            edges[k] = nearest
    # Snapping may collapse spans; drop empties while keeping order.
    edges[0] = props[0].start_ms
    edges[-1] = props[-1].end_ms

    spans: list[tuple[int, int, RootProposition]] = []
    for k, prop in enumerate(props):
        lo, hi = edges[k], edges[k + 1]
        if hi > lo:
            spans.append((lo, hi, prop))
    if not spans:
        return props

    refined: list[RootProposition] = []
    for color, (lo, hi, prop) in enumerate(spans):
        title = prop.title
        source = prop.source
        best_group = None
        best_cover = 0
        for g in title_groups:
            cover = min(hi, g.end_ms) - max(lo, g.start_ms)
            if cover > best_cover:
                best_cover = cover
                best_group = g
        if best_group is not None and (
            title_overlap(best_group.title, title, stopwords) >= theta_title
        ):
            title = best_group.title
            source = PropositionSource.SLIDE_ASSISTED
        refined.append(
            RootProposition(
                id=proposition_id(video_id, title, lo),
                title=title,
                start_ms=lo,
                end_ms=hi,
                color_index=color,
                source=source,
            )
        )
    return refined
