"""Labeling inter-boundary spans as root propositions."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace
from enum import Enum

from ctt.keyphrase.phrases import Keyphrase
from ctt.segmentation.windows import TopicWindow


class PropositionSource(Enum):
    TRANSCRIPT_ONLY = "transcript_only"
    SLIDE_ASSISTED = "slide_assisted"
    USER_EDITED = "user_edited"


def proposition_id(video_id: str, title: str, start_ms: int) -> str:
    digest = hashlib.sha1(
        f"{video_id}\x1f{title}\x1f{start_ms}".encode("utf-8")
    ).hexdigest()
    return f"p_{digest[:16]}"


@dataclass(frozen=True)
class RootProposition:
    id: str
    title: str
    start_ms: int
    end_ms: int
    color_index: int
    source: PropositionSource = PropositionSource.TRANSCRIPT_ONLY


def label_propositions(
    windows: list[TopicWindow],
    boundaries: list[int],
    candidate_topics: list[Keyphrase] | None = None,
    duration_ms: int | None = None,
    video_id: str = "",
) -> list[RootProposition]:
    """Title each inter-boundary span with its aggregate max-weight topic.

    Weights are summed over the windows of each span; ties go to the
    topic with the earliest first occurrence.  The first span is pulled
    back to 0 and the last pushed to ``duration_ms`` so the propositions
    tile the whole video.  Color indices run chronologically.
    """
    if not windows:
        return []
    span_start = windows[0].start_ms
    span_end = windows[-1].end_ms
    cuts = [b for b in sorted(set(boundaries)) if span_start < b < span_end]
    edges = [span_start] + cuts + [span_end]

    first_seen = {t.text: t.first_start_ms for t in candidate_topics or []}
    surface = {t.text: (t.surface or t.text) for t in candidate_topics or []}

    props: list[RootProposition] = []
    for color, (lo, hi) in enumerate(zip(edges, edges[1:])):
        totals: dict[str, float] = {}
        for w in windows:
            if w.start_ms >= hi or w.end_ms <= lo:
                continue
            for topic, weight in w.topic_weights.items():
                totals[topic] = totals.get(topic, 0.0) + weight
        if totals:
            label = min(
                totals.items(),
                key=lambda kv: (-kv[1], first_seen.get(kv[0], 0), kv[0]),
            )[0]
        else:
            label = "untitled"
        title = surface.get(label, label)
        props.append(
            RootProposition(
                id=proposition_id(video_id, title, lo),
                title=title,
                start_ms=lo,
                end_ms=hi,
                color_index=color,
            )
        )

    if props:
        first = props[0]
        if first.start_ms > 0:
            props[0] = replace(
                first,
                start_ms=0,
                id=proposition_id(video_id, first.title, 0),
            )
        if duration_ms is not None and props[-1].end_ms < duration_ms:
            props[-1] = replace(props[-1], end_ms=duration_ms)
    return props


def merge_adjacent_same_title(props: list[RootProposition]) -> list[RootProposition]:
    """Collapse neighbors with identical titles into one proposition.

    A brief argmax flip can split one topic into two adjacent spans with
    the same label; those are a single proposition for every consumer.
    """
    merged: list[RootProposition] = []
    for p in props:
        if merged and merged[-1].title == p.title:
            prev = merged[-1]
            merged[-1] = replace(prev, end_ms=p.end_ms)
        else:
            merged.append(p)
    return [replace(p, color_index=i) for i, p in enumerate(merged)]
