"""Slide-channel analysis: shot boundaries, layout grouping, structure."""

from ctt.slidestruct.emd import emd_1d
from ctt.slidestruct.shots import (
    ShotBoundary,
    SlideShot,
    detect_shots,
    select_final_states,
)
from ctt.slidestruct.layout import (
    Alignment,
    SlideLine,
    SlideParagraph,
    group_lines,
    group_paragraphs,
)
from ctt.slidestruct.headline import HeadlineRuleReport, extract_headline
from ctt.slidestruct.tree import SlideTree, SlideTreeNode, build_slide_tree

__all__ = [
    "Alignment",
    "HeadlineRuleReport",
    "ShotBoundary",
    "SlideLine",
    "SlideParagraph",
    "SlideShot",
    "SlideTree",
    "SlideTreeNode",
    "build_slide_tree",
    "detect_shots",
    "emd_1d",
    "extract_headline",
    "group_lines",
    "group_paragraphs",
    "select_final_states",
]
