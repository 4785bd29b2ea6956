"""Boundary detection from topic-weight change over time."""

from __future__ import annotations

from ctt.keyphrase.phrases import Keyphrase
from ctt.segmentation.windows import TopicWindow


def _argmax_topic(
    window: TopicWindow, first_seen: dict[str, int]
) -> str | None:
    """Dominant topic of a window; ties go to the earliest-seen topic."""
    if not window.topic_weights:
        return None
    return min(
        window.topic_weights.items(),
        key=lambda kv: (-kv[1], first_seen.get(kv[0], 0), kv[0]),
    )[0]


def dominant_topics(
    windows: list[TopicWindow], candidate_topics: list[Keyphrase]
) -> list[str | None]:
    """Per-window argmax topic, forward-filled over silent windows.

    A window where every candidate weighs zero carries no evidence of a
    topic change, so it inherits the previous window's dominant topic.
    """
    first_seen = {t.text: t.first_start_ms for t in candidate_topics}
    doms: list[str | None] = []
    for w in windows:
        if w.topic_weights and max(w.topic_weights.values()) > 0.0:
            doms.append(_argmax_topic(w, first_seen))
        else:
            doms.append(doms[-1] if doms else None)
    return doms


def detect_boundaries(
    windows: list[TopicWindow],
    candidate_topics: list[Keyphrase],
    persistence: int = 2,
) -> list[int]:
    """Emit a boundary where the dominant topic changes and persists.

    A boundary lands at window k's start when the argmax topic of
    window k differs from window k-1 and remains the argmax for at
    least ``persistence`` consecutive windows (including k).  Spurious
    one-window flips therefore never produce boundaries.
    """
    if persistence < 1:
        raise ValueError("persistence must be >= 1")
    doms = dominant_topics(windows, candidate_topics)
    boundaries: list[int] = []
    for k in range(1, len(windows)):
        if doms[k] is None or doms[k] == doms[k - 1]:
            continue
        if k + persistence > len(windows):
            continue
        if all(doms[j] == doms[k] for j in range(k, k + persistence)):
            boundaries.append(windows[k].start_ms)
    return sorted(set(boundaries))
