"""Root-proposition extraction from timestamped token streams."""

from ctt.segmentation.windows import TopicWindow, window_transcript
from ctt.segmentation.weights import (
    cosine,
    merge_similar_topics,
    propagate_topic_weights,
)
from ctt.segmentation.boundaries import detect_boundaries
from ctt.segmentation.propositions import (
    PropositionSource,
    RootProposition,
    label_propositions,
)
from ctt.segmentation.refine import (
    TitleGroup,
    group_slide_titles,
    refine_with_slide_titles,
    title_overlap,
)

__all__ = [
    "PropositionSource",
    "RootProposition",
    "TitleGroup",
    "TopicWindow",
    "cosine",
    "detect_boundaries",
    "group_slide_titles",
    "label_propositions",
    "merge_similar_topics",
    "propagate_topic_weights",
    "refine_with_slide_titles",
    "title_overlap",
    "window_transcript",
]
