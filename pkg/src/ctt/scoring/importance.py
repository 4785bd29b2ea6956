"""Concept importance: TF-IDF frequency blended with graph centrality."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ctt.conceptgraph.model import Concept, Relation, RelationType


@dataclass(frozen=True)
class ImportanceBreakdown:
    concept_id: str
    tfidf_norm: float
    pagerank_norm: float
    combined: float
    alpha: float


def tfidf(label_stems: tuple[str, ...], docs: list[list[str]], owner: int) -> float:
    """tf * idf of a stemmed label across proposition documents.

    ``docs`` holds one stem sequence per root proposition; ``owner`` is
    the proposition owning the concept.  tf counts contiguous matches of
    the label in the owning document, idf is ln(N / df) over documents
    containing the label, and an absent label scores 0 by convention.
    """
    if not docs or not label_stems:
        return 0.0
    n_docs = len(docs)

    def count_runs(doc: list[str]) -> int:
        k = len(label_stems)
        if k == 1:
            return sum(1 for s in doc if s == label_stems[0])
        return sum(
            1
            for i in range(len(doc) - k + 1)
            if all(doc[i + j] == label_stems[j] for j in range(k))
        )

    tf = count_runs(docs[owner])
    df = sum(1 for doc in docs if count_runs(doc) > 0)
    if tf == 0 or df == 0:
        return 0.0
    return tf * math.log(n_docs / df)


def pagerank(
    concepts: list[Concept],
    relations: list[Relation],
    damping: float = 0.85,
    tol: float = 1e-9,
    max_iters: int = 200,
) -> dict[str, float]:
    """Power-iterate over the interaction graph.

    Nodes are all concepts; edges are the association and similarity
    relations, both walked in either direction.  Sequence and inclusion
    edges encode layout and hierarchy, not interaction, and stay out.
    Dangling nodes teleport uniformly so the scores sum to 1.
    """
    nodes = sorted(c.id for c in concepts)
    n = len(nodes)
    if n == 0:
        return {}
    weights: dict[str, dict[str, float]] = {v: {} for v in nodes}
    for r in relations:
        if r.type not in (RelationType.ASSOCIATION, RelationType.SIMILARITY):
            continue
        if r.src_id not in weights or r.dst_id not in weights:
            continue
        if r.src_id == r.dst_id:
            continue
        weights[r.src_id][r.dst_id] = weights[r.src_id].get(r.dst_id, 0.0) + 1.0
        weights[r.dst_id][r.src_id] = weights[r.dst_id].get(r.src_id, 0.0) + 1.0

    strength = {v: sum(weights[v].values()) for v in nodes}
    rank = {v: 1.0 / n for v in nodes}
    for _ in range(max_iters):
        dangling = sum(rank[v] for v in nodes if strength[v] == 0.0)
        nxt = {}
        for v in nodes:
            incoming = sum(
                rank[u] * w / strength[u] for u, w in weights[v].items()
            )
            nxt[v] = (1.0 - damping) / n + damping * (incoming + dangling / n)
        delta = max(abs(nxt[v] - rank[v]) for v in nodes)
        rank = nxt
        if delta < tol:
            break
    return rank


def _min_max(values: dict[str, float]) -> dict[str, float]:
    """Normalize to [0,1]; a constant series maps to 0.5 everywhere."""
    if not values:
        return {}
    lo = min(values.values())
    hi = max(values.values())
    if hi == lo:
        return {k: 0.5 for k in values}
    return {k: (v - lo) / (hi - lo) for k, v in values.items()}


def importance(
    concepts: list[Concept],
    raw_tfidf: dict[str, float],
    raw_pagerank: dict[str, float],
    alpha: float = 0.5,
) -> list[ImportanceBreakdown]:
    """Min-max normalize both signals, then combine with weight alpha."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    ids = [c.id for c in concepts]
    t_norm = _min_max({i: raw_tfidf.get(i, 0.0) for i in ids})
    p_norm = _min_max({i: raw_pagerank.get(i, 0.0) for i in ids})
    return [
        ImportanceBreakdown(
            concept_id=i,
            tfidf_norm=t_norm[i],
            pagerank_norm=p_norm[i],
            combined=alpha * t_norm[i] + (1.0 - alpha) * p_norm[i],
            alpha=alpha,
        )
        for i in ids
    ]
