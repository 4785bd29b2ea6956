"""Cross-time topic weight propagation over windows."""

from __future__ import annotations

import math

from ctt.keyphrase.phrases import Keyphrase
from ctt.segmentation.windows import TopicWindow


def cosine(v: dict[str, float], w: dict[str, float]) -> float:
    """Cosine similarity between sparse vectors; 0 when either is empty."""
    if not v or not w:
        return 0.0
    dot = sum(x * w.get(k, 0.0) for k, x in v.items())
    nv = math.sqrt(sum(x * x for x in v.values()))
    nw = math.sqrt(sum(x * x for x in w.values()))
    if nv == 0.0 or nw == 0.0:
        return 0.0
    return dot / (nv * nw)


def merge_similar_topics(topics: list[Keyphrase]) -> list[Keyphrase]:
    """Merge candidate topics whose stem sets are identical after stemming.

    Occurrences are pooled and scores summed; the kept label is the
    higher-scoring variant.
    """
    by_key: dict[frozenset[str], Keyphrase] = {}
    for topic in topics:
        key = frozenset(topic.stems)
        prev = by_key.get(key)
        if prev is None:
            by_key[key] = topic
        else:
            keep, other = (prev, topic) if prev.score >= topic.score else (topic, prev)
            merged_occ = tuple(sorted(set(prev.occurrences) | set(topic.occurrences)))
            by_key[key] = Keyphrase(
                text=keep.text,
                score=prev.score + topic.score,
                occurrences=merged_occ,
                surface=keep.surface,
            )
    out = list(by_key.values())
    out.sort(key=lambda p: (-p.score, p.first_start_ms, p.text))
    return out


def _restricted(vec: dict[str, float], stems: tuple[str, ...]) -> dict[str, float]:
    return {s: vec[s] for s in stems if s in vec}


def _presence(window: TopicWindow, stems: tuple[str, ...]) -> float:
    total = sum(window.term_vector.values())
    if total == 0.0:
        return 0.0
    hits = sum(window.term_vector.get(s, 0.0) for s in stems)
    return min(1.0, hits / total)


def propagate_topic_weights(
    windows: list[TopicWindow],
    candidate_topics: list[Keyphrase],
    lam: float = 0.7,
) -> list[TopicWindow]:
    """Fill each window's topic weights by cross-time cosine matching.

    For window i+1 the weight of topic t blends the cosine between the
    topic's track vector and the window's term vector restricted to t's
    stems with t's presence in window i+1:

        w(t, i+1) = lam * cos(v_t_i, v_t_i+1) + (1 - lam) * presence(t, i+1)

    Cross-time matching carries each topic's most recent non-empty
    restricted vector forward as its track, so one window without an
    explicit mention does not sever the topic's continuity for the next
    comparison.  The first window has no history: weight is presence
    alone.  Weights are clamped to [0, 1].
    """
    if not candidate_topics:
        raise ValueError("candidate_topics must be non-empty")
    if not 0.0 <= lam <= 1.0:
        raise ValueError("lambda must lie in [0, 1]")

    tracks: dict[str, dict[str, float]] = {}
    for i, win in enumerate(windows):
        weights: dict[str, float] = {}
        for topic in candidate_topics:
            stems = topic.stems
            presence = _presence(win, stems)
            here = _restricted(win.term_vector, stems)
            if i == 0:
                weight = presence
            else:
                sim = cosine(tracks.get(topic.text, {}), here)
                weight = lam * sim + (1.0 - lam) * presence
            # A window holding only part of a phrase is a glimpse, not a
            # new signature; the track updates on full sightings only.
            if here and all(s in here for s in stems):
                tracks[topic.text] = here
            weights[topic.text] = min(1.0, max(0.0, weight))
        win.topic_weights = weights
    return windows
