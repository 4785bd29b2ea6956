"""Rule-based slide headline selection."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass

from ctt.ingest.slides import TextBox
from ctt.slidestruct.layout import SlideParagraph, group_lines, group_paragraphs

_WORD_WITH_LETTER = re.compile(r"[^\s]*[A-Za-z][^\s]*")

MAX_TITLE_WORDS = 12
MIN_PRIOR_TITLES_FOR_COLOR = 3


@dataclass(frozen=True)
class HeadlineRuleReport:
    paragraph: SlideParagraph
    location_pass: bool
    font_size_pass: bool
    color_pass: bool
    word_count_pass: bool
    isolation_pass: bool
    eliminated: bool


def _title_word_count(text: str) -> int:
    # Pure numbers and punctuation do not count toward the title length.
    return len(_WORD_WITH_LETTER.findall(text))


def _rule_reports(
    paragraphs: list[SlideParagraph],
    corpus_title_colors: list[tuple[int, int, int]],
    frame_w: float,
    frame_h: float,
) -> list[HeadlineRuleReport]:
    if not paragraphs:
        return []
    max_font = max(p.font_size for p in paragraphs)
    min_font = min(p.font_size for p in paragraphs)
    color_mode: tuple[int, int, int] | None = None
    enforce_color = len(corpus_title_colors) >= MIN_PRIOR_TITLES_FOR_COLOR
    if corpus_title_colors:
        color_mode = Counter(corpus_title_colors).most_common(1)[0][0]

    ordered = sorted(paragraphs, key=lambda p: (p.y, p.x))
    gaps = [
        max(0.0, b.y - a.bottom) for a, b in zip(ordered, ordered[1:])
    ]
    avg_gap = sum(gaps) / len(gaps) if gaps else 0.0

    def nearest_gap(p: SlideParagraph) -> float:
        best = None
        for other in paragraphs:
            if other is p:
                continue
            if other.y >= p.bottom:
                gap = other.y - p.bottom
            elif p.y >= other.bottom:
                gap = p.y - other.bottom
            else:
                gap = 0.0
            if best is None or gap < best:
                best = gap
        return best if best is not None else float("inf")

    reports = []
    for p in paragraphs:
        word_count = _title_word_count(p.text)
        word_count_pass = 1 <= word_count <= MAX_TITLE_WORDS
        color_pass = color_mode is None or p.color == color_mode
        location_pass = p.y <= frame_h / 2.0 or p.x <= frame_w / 2.0
        font_size_pass = p.font_size >= max_font and max_font > min_font
        isolation_pass = len(paragraphs) > 1 and nearest_gap(p) > avg_gap
        eliminated = (not word_count_pass) or (enforce_color and not color_pass)
        reports.append(
            HeadlineRuleReport(
                paragraph=p,
                location_pass=location_pass,
                font_size_pass=font_size_pass,
                color_pass=color_pass,
                word_count_pass=word_count_pass,
                isolation_pass=isolation_pass,
                eliminated=eliminated,
            )
        )
    return reports


def extract_headline(
    boxes: list[TextBox],
    corpus_titles: list[tuple[str, tuple[int, int, int]]] | None = None,
    frame_w: float = 0.0,
    frame_h: float = 0.0,
) -> SlideParagraph | None:
    """Pick the headline paragraph of one final-state frame.

    Every candidate paragraph gets a pass/fail verdict on the five title
    rules.  Word-count failures are always eliminated; color failures are
    eliminated once at least three prior titles have established the
    title color.  Among the survivors the preference is lexicographic:
    font-size rule pass first, then location (smaller y, then smaller x),
    then isolation.  Returns None when nothing survives.
    """
    if not boxes:
        return None
    if frame_w <= 0:
        frame_w = max(b.x + b.width for b in boxes)
    if frame_h <= 0:
        frame_h = max(b.y + b.height for b in boxes)

    paragraphs = group_paragraphs(group_lines(boxes))
    colors = [color for _, color in (corpus_titles or [])]
    reports = _rule_reports(paragraphs, colors, frame_w, frame_h)
    survivors = [r for r in reports if not r.eliminated]
    if not survivors:
        return None
    survivors.sort(
        key=lambda r: (
            not r.font_size_pass,
            r.paragraph.y,
            r.paragraph.x,
            not r.isolation_pass,
        )
    )
    return survivors[0].paragraph


def headline_rule_reports(
    boxes: list[TextBox],
    corpus_titles: list[tuple[str, tuple[int, int, int]]] | None = None,
    frame_w: float = 0.0,
    frame_h: float = 0.0,
) -> list[HeadlineRuleReport]:
    """Expose per-paragraph rule verdicts (used by tests and eval output)."""
    if not boxes:
        return []
    if frame_w <= 0:
        frame_w = max(b.x + b.width for b in boxes)
    if frame_h <= 0:
        frame_h = max(b.y + b.height for b in boxes)
    paragraphs = group_paragraphs(group_lines(boxes))
    colors = [color for _, color in (corpus_titles or [])]
    return _rule_reports(paragraphs, colors, frame_w, frame_h)
