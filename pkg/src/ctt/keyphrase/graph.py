"""Co-occurrence graph over stemmed content tokens."""

from __future__ import annotations

from dataclasses import dataclass, field

from ctt.ingest.tokens import TokenStream


@dataclass
class CooccurrenceGraph:
    """Undirected weighted graph; weights count window co-occurrences.

    No self-loops.  Edges are keyed by the sorted stem pair so the graph
    is symmetric by construction.
    """

    nodes: set[str] = field(default_factory=set)
    edges: dict[tuple[str, str], int] = field(default_factory=dict)

    def weight(self, a: str, b: str) -> int:
        if a == b:
            return 0
        key = (a, b) if a < b else (b, a)
        return self.edges.get(key, 0)

    def add_pair(self, a: str, b: str) -> None:
        if a == b:
            return
        key = (a, b) if a < b else (b, a)
        self.edges[key] = self.edges.get(key, 0) + 1

    def neighbors(self, node: str) -> dict[str, int]:
        out: dict[str, int] = {}
        for (a, b), w in self.edges.items():
            if a == node:
                out[b] = w
            elif b == node:
                out[a] = w
        return out


def build_cooccurrence_graph(stream: TokenStream, window: int = 4) -> CooccurrenceGraph:
    """Count co-occurrences of content stems within a sliding token window.

    Stopwords are excluded before windowing, so the window runs over the
    content-token sequence.  Two positions i < j co-occur when
    j - i < window; each position pair contributes weight 1.
    """
    if window < 2:
        raise ValueError("window must be >= 2 tokens")
    stems = [t.stem for t in stream.content_tokens()]
    graph = CooccurrenceGraph()
    graph.nodes.update(stems)
    for i in range(len(stems)):
        for j in range(i + 1, min(i + window, len(stems))):
            graph.add_pair(stems[i], stems[j])
    return graph
