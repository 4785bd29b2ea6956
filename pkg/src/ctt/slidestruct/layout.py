"""Bottom-up grouping of OCR word boxes into lines and paragraphs."""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from enum import Enum

from ctt.ingest.slides import TextBox


class Alignment(Enum):
    LEFT = "left"
    CENTER = "center"
    RIGHT = "right"


@dataclass(frozen=True)
class SlideLine:
    box_ids: tuple[str, ...]
    x: float
    y: float
    width: float
    height: float
    text: str
    font_size: float
    color: tuple[int, int, int]
    bold: bool
    italic: bool
    underline: bool

    @property
    def right(self) -> float:
        return self.x + self.width

    @property
    def bottom(self) -> float:
        return self.y + self.height

    @property
    def center_x(self) -> float:
        return self.x + self.width / 2.0


@dataclass(frozen=True)
class SlideParagraph:
    box_ids: tuple[str, ...]
    x: float
    y: float
    width: float
    height: float
    text: str
    font_size: float
    color: tuple[int, int, int]
    alignment: Alignment
    indent_px: float
    bold: bool
    italic: bool
    underline: bool
    lines: tuple[SlideLine, ...]

    @property
    def bottom(self) -> float:
        return self.y + self.height


def _avg_char_width(boxes: list[TextBox]) -> float:
    chars = sum(len(b.text) for b in boxes)
    if chars == 0:
        return 1.0
    return sum(b.width for b in boxes) / chars


def _make_line(boxes: list[TextBox]) -> SlideLine:
    boxes = sorted(boxes, key=lambda b: b.x)
    x0 = min(b.x for b in boxes)
    y0 = min(b.y for b in boxes)
    x1 = max(b.x + b.width for b in boxes)
    y1 = max(b.y + b.height for b in boxes)
    sizes = [b.font_size for b in boxes]
    return SlideLine(
        box_ids=tuple(b.box_id for b in boxes),
        x=x0,
        y=y0,
        width=x1 - x0,
        height=y1 - y0,
        text=" ".join(b.text for b in boxes),
        font_size=statistics.median(sizes),
        color=boxes[0].color,
        bold=all("bold" in b.style_flags for b in boxes),
        italic=all("italic" in b.style_flags for b in boxes),
        underline=all("underline" in b.style_flags for b in boxes),
    )


def group_lines(boxes: list[TextBox]) -> list[SlideLine]:
    """Merge word boxes into text lines.

    Two boxes join the same line when their vertical centers sit within
    half the median box height, their font sizes agree within 10%, and
    the horizontal gap between them is at most twice the frame's average
    character width.
    """
    if not boxes:
        return []
    med_h = statistics.median(b.height for b in boxes)
    acw = _avg_char_width(boxes)
    max_gap = 2.0 * acw

    remaining = sorted(boxes, key=lambda b: (b.y + b.height / 2.0, b.x))
    lines: list[SlideLine] = []
    while remaining:
        seed = remaining.pop(0)
        members = [seed]
        changed = True
        while changed:
            changed = False
            for b in list(remaining):
                band_ok = any(
                    abs((b.y + b.height / 2.0) - (m.y + m.height / 2.0))
                    <= 0.5 * med_h
                    for m in members
                )
                if not band_ok:
                    continue
                font_ok = any(
                    abs(b.font_size - m.font_size) <= 0.10 * max(b.font_size, m.font_size)
                    for m in members
                )
                if not font_ok:
                    continue
                gap_ok = any(
                    _h_gap(b, m) <= max_gap for m in members
                )
                if not gap_ok:
                    continue
                members.append(b)
                remaining.remove(b)
                changed = True
        lines.append(_make_line(members))
    lines.sort(key=lambda ln: (ln.y, ln.x))
    return lines


def _h_gap(a: TextBox, b: TextBox) -> float:
    left, right = (a, b) if a.x <= b.x else (b, a)
    return max(0.0, right.x - (left.x + left.width))


def classify_alignment(
    line: SlideLine, column_left: float, column_right: float, tol: float
) -> Alignment:
    if line.x - column_left <= tol:
        return Alignment.LEFT
    if column_right - line.right <= tol:
        return Alignment.RIGHT
    column_center = (column_left + column_right) / 2.0
    if abs(line.center_x - column_center) <= tol:
        return Alignment.CENTER
    return Alignment.LEFT


def _aligned_together(
    a: SlideLine, b: SlideLine, cls_a: Alignment, cls_b: Alignment, tol: float
) -> bool:
    """Same alignment class anchored at the same margin.

    Two left-aligned lines at different indents are different blocks, so
    the anchor edge must agree within tolerance as well.
    """
    if cls_a != cls_b:
        return False
    if cls_a is Alignment.LEFT:
        return abs(a.x - b.x) <= tol
    if cls_a is Alignment.RIGHT:
        return abs(a.right - b.right) <= tol
    return abs(a.center_x - b.center_x) <= tol


def group_paragraphs(lines: list[SlideLine]) -> list[SlideParagraph]:
    """Merge vertically adjacent lines into paragraphs.

    Adjacent lines join when their heights agree within 20%, they share
    an alignment class, and the vertical gap between them is at most 1.5
    times the median line gap of the frame.
    """
    if not lines:
        return []
    ordered = sorted(lines, key=lambda ln: (ln.y, ln.x))
    column_left = min(ln.x for ln in ordered)
    column_right = max(ln.right for ln in ordered)
    total_chars = sum(len(ln.text) for ln in ordered) or 1
    acw = sum(ln.width for ln in ordered) / total_chars
    tol = max(2.0 * acw, 8.0)

    gaps = [
        max(0.0, b.y - a.bottom) for a, b in zip(ordered, ordered[1:])
    ]
    med_gap = statistics.median(gaps) if gaps else 0.0
    max_gap = 1.5 * med_gap

    aligns = [
        classify_alignment(ln, column_left, column_right, tol) for ln in ordered
    ]

    groups: list[list[int]] = [[0]]
    for i in range(1, len(ordered)):
        prev_i = groups[-1][-1]
        prev, cur = ordered[prev_i], ordered[i]
        height_ok = abs(prev.height - cur.height) <= 0.20 * max(
            prev.height, cur.height
        )
        align_ok = _aligned_together(prev, cur, aligns[prev_i], aligns[i], tol)
        gap = max(0.0, cur.y - prev.bottom)
        gap_ok = gaps == [] or gap <= max_gap
        if height_ok and align_ok and gap_ok:
            groups[-1].append(i)
        else:
            groups.append([i])

    paragraphs = []
    for group in groups:
        members = [ordered[i] for i in group]
        x0 = min(m.x for m in members)
        y0 = min(m.y for m in members)
        x1 = max(m.right for m in members)
        y1 = max(m.bottom for m in members)
        paragraphs.append(
            SlideParagraph(
                box_ids=tuple(bid for m in members for bid in m.box_ids),
                x=x0,
                y=y0,
                width=x1 - x0,
                height=y1 - y0,
                text=" ".join(m.text for m in members),
                font_size=statistics.median(m.font_size for m in members),
                color=members[0].color,
                alignment=aligns[group[0]],
                indent_px=x0 - column_left,
                bold=all(m.bold for m in members),
                italic=all(m.italic for m in members),
                underline=all(m.underline for m in members),
                lines=tuple(members),
            )
        )
    paragraphs.sort(key=lambda p: (p.y, p.x))
    return paragraphs
