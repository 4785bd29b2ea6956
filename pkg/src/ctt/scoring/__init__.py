"""Importance scoring, style distributions and sparkline bins."""

from ctt.scoring.importance import (
    ImportanceBreakdown,
    importance,
    pagerank,
    tfidf,
)
from ctt.scoring.timelines import (
    SparklineBins,
    occurrence_sparkline,
    style_distribution,
)

__all__ = [
    "ImportanceBreakdown",
    "SparklineBins",
    "importance",
    "occurrence_sparkline",
    "pagerank",
    "style_distribution",
    "tfidf",
]
