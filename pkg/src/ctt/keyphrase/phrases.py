"""Merge adjacent top-ranked stems into keyphrases."""

from __future__ import annotations

from dataclasses import dataclass

from ctt.ingest.tokens import TokenStream

MAX_PHRASE_STEMS = 4


@dataclass(frozen=True)
class Keyphrase:
    """A 1-4 stem phrase with its rank score and occurrence spans."""

    text: str  # stems joined by a single space
    score: float
    occurrences: tuple[tuple[int, int], ...]
    surface: str = ""  # most frequent surface form, for display

    @property
    def stems(self) -> tuple[str, ...]:
        return tuple(self.text.split(" "))

    @property
    def first_start_ms(self) -> int:
        return self.occurrences[0][0]


def _find_runs(stream: TokenStream, stems: tuple[str, ...]) -> list[tuple[int, int]]:
    """All contiguous token runs (over the full stream) matching the stems."""
    toks = stream.tokens
    k = len(stems)
    runs = []
    for i in range(len(toks) - k + 1):
        if all(toks[i + j].stem == stems[j] for j in range(k)):
            runs.append((toks[i].start_ms, toks[i + k - 1].end_ms))
    return runs


def extract_keyphrases(
    stream: TokenStream, ranks: dict[str, float], top_k: int
) -> list[Keyphrase]:
    """Extract up to ``top_k`` keyphrases from ranked stems.

    Candidate stems are the ``top_k`` highest-ranked (ties included).
    Adjacent candidates in the token stream merge into phrases, longest
    match left to right, capped at four stems; a stopword or
    non-candidate token breaks the run.  The phrase score is the sum of
    member scores.  Output is sorted by score descending with ties going
    to the earliest occurrence.
    """
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    if not ranks:
        return []

    ordered = sorted(ranks.items(), key=lambda kv: (-kv[1], kv[0]))
    if len(ordered) > top_k:
        cutoff = ordered[top_k - 1][1]
        candidates = {stem for stem, score in ordered if score >= cutoff}
    else:
        candidates = {stem for stem, _ in ordered}

    toks = stream.tokens
    phrases: dict[tuple[str, ...], None] = {}
    i = 0
    while i < len(toks):
        tok = toks[i]
        if tok.is_stopword or tok.stem not in candidates:
            i += 1
            continue
        j = i
        stems: list[str] = []
        while (
            j < len(toks)
            and len(stems) < MAX_PHRASE_STEMS
            and not toks[j].is_stopword
            and toks[j].stem in candidates
            and toks[j].stem not in stems  # a term never repeats a stem
        ):
            stems.append(toks[j].stem)
            j += 1
        phrases.setdefault(tuple(stems), None)
        i = j

    results = []
    for stems in phrases:
        runs = _find_runs(stream, stems)
        if not runs:
            continue
        score = sum(ranks.get(s, 0.0) for s in stems)
        surface = _dominant_surface(stream, stems)
        results.append(
            Keyphrase(
                text=" ".join(stems),
                score=score,
                occurrences=tuple(runs),
                surface=surface,
            )
        )
    results.sort(key=lambda p: (-p.score, p.first_start_ms, p.text))
    return results[:top_k]


def _dominant_surface(stream: TokenStream, stems: tuple[str, ...]) -> str:
    """Most frequent surface form among runs matching the stems."""
    counts: dict[str, int] = {}
    toks = stream.tokens
    k = len(stems)
    for i in range(len(toks) - k + 1):
        if all(toks[i + j].stem == stems[j] for j in range(k)):
            surface = " ".join(toks[i + j].surface for j in range(k))
            counts[surface] = counts.get(surface, 0) + 1
    if not counts:
        return " ".join(stems)
    return max(counts.items(), key=lambda kv: (kv[1], kv[0]))[0]
