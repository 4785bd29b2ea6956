"""Weighted PageRank over the co-occurrence graph."""

from __future__ import annotations

from dataclasses import dataclass

from ctt.keyphrase.graph import CooccurrenceGraph


@dataclass(frozen=True)
class RankResult:
    scores: dict[str, float]
    converged: bool
    iterations: int


def rank_nodes(
    graph: CooccurrenceGraph,
    damping: float = 0.85,
    max_iters: int = 100,
    tol: float = 1e-6,
) -> RankResult:
    """Power-iterate weighted PageRank to a fixed point.

    Uniform teleport; a node's rank flows to neighbors proportionally to
    edge weight.  Nodes with no edges (dangling) spread their rank
    uniformly so scores always sum to 1.  Iteration stops when the max
    absolute per-node change drops below ``tol``; if ``max_iters`` is
    exhausted first the best iterate is returned with ``converged`` False.
    """
    if not 0.0 < damping < 1.0:
        raise ValueError("damping must be in (0, 1)")
    nodes = sorted(graph.nodes)
    n = len(nodes)
    if n == 0:
        return RankResult(scores={}, converged=True, iterations=0)

    adjacency = {node: graph.neighbors(node) for node in nodes}
    strength = {node: float(sum(adjacency[node].values())) for node in nodes}

    rank = {node: 1.0 / n for node in nodes}
    iterations = 0
    converged = False
    for iterations in range(1, max_iters + 1):
        dangling = sum(rank[v] for v in nodes if strength[v] == 0.0)
        nxt = {}
        for v in nodes:
            incoming = sum(
                rank[u] * w / strength[u] for u, w in adjacency[v].items()
            )
            nxt[v] = (1.0 - damping) / n + damping * (incoming + dangling / n)
        delta = max(abs(nxt[v] - rank[v]) for v in nodes)
        rank = nxt
        if delta < tol:
            converged = True
            break
    return RankResult(scores=rank, converged=converged, iterations=iterations)
