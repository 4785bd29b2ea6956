"""Graph-based keyword and keyphrase extraction over token streams."""

from ctt.keyphrase.graph import CooccurrenceGraph, build_cooccurrence_graph
from ctt.keyphrase.rank import RankResult, rank_nodes
from ctt.keyphrase.phrases import Keyphrase, extract_keyphrases

__all__ = [
    "CooccurrenceGraph",
    "Keyphrase",
    "RankResult",
    "build_cooccurrence_graph",
    "extract_keyphrases",
    "rank_nodes",
]
