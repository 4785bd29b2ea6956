"""Exact-millisecond style distributions and sparkline occurrence bins."""

from __future__ import annotations

from dataclasses import dataclass

from ctt.conceptgraph.model import Concept
from ctt.ingest.styles import StyleSpan
from ctt.ingest.tokens import TokenStream


@dataclass(frozen=True)
class SparklineBins:
    concept_id: str
    bin_ms: int
    values: tuple[int, ...]


def style_distribution(
    concept: Concept, style_spans: list[StyleSpan]
) -> dict[str, int]:
    """Overlap of the concept's spans with each course style, in ms.

    Integer interval intersection keeps the total exact: the values sum
    to the concept's total span length whenever the style spans tile the
    video.
    """
    out: dict[str, int] = {}
    for s, e in concept.spans:
        for span in style_spans:
            lo = max(s, span.start_ms)
            hi = min(e, span.end_ms)
            if hi > lo:
                key = span.style.value
                out[key] = out.get(key, 0) + (hi - lo)
    return out


def occurrence_sparkline(
    concept: Concept,
    stream: TokenStream,
    bin_ms: int = 60_000,
    duration_ms: int | None = None,
) -> SparklineBins:
    """Bin the concept's mention durations over the video timeline.

    Every stem run matching the concept's label contributes its token
    duration; a run crossing a bin edge is split by interval
    intersection, so the bin total equals the total mention duration
    exactly.
    """
    if bin_ms <= 0:
        raise ValueError("bin_ms must be positive")
    total = duration_ms if duration_ms is not None else stream.end_ms
    n_bins = max(1, -(-total // bin_ms))  # ceil division
    values = [0] * n_bins

    stems = concept.stems
    toks = stream.tokens
    k = len(stems)
    runs: list[tuple[int, int]] = []
    if k:
        for i in range(len(toks) - k + 1):
            if all(toks[i + j].stem == stems[j] for j in range(k)):
                runs.append((toks[i].start_ms, toks[i + k - 1].end_ms))

    for s, e in runs:
        if e <= s:
            continue
        for b in range(s // bin_ms, (e - 1) // bin_ms + 1):
            lo = max(s, b * bin_ms)
            hi = min(e, (b + 1) * bin_ms)
            # Mass past the nominal grid folds into the last bin so the
            # totals stay exact even for runs touching the video end.
            values[min(b, n_bins - 1)] += hi - lo
    return SparklineBins(concept_id=concept.id, bin_ms=bin_ms, values=tuple(values))
