"""Course-style span parsing (slides / talking head / drawing board)."""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

from ctt.errors import EmptyInput, StyleCoverageError


class CourseStyle(Enum):
    SLIDES = "slides"
    TALKING_HEAD = "talking_head"
    DRAWING_BOARD = "drawing_board"


@dataclass(frozen=True)
class StyleSpan:
    start_ms: int
    end_ms: int
    style: CourseStyle


def parse_style_spans(data: bytes) -> list[StyleSpan]:
    """Parse `{"spans": [...]}`; spans must tile [0, duration] exactly.

    These labels come from offline detectors; this parser only validates
    the tiling invariant, it never re-derives styles.
    """
    payload = json.loads(data.decode("utf-8"))
    raw_spans = payload.get("spans", [])
    if not raw_spans:
        raise EmptyInput("no style spans")
    spans = [
        StyleSpan(int(s["start_ms"]), int(s["end_ms"]), CourseStyle(s["style"]))
        for s in raw_spans
    ]
    spans.sort(key=lambda s: s.start_ms)
    if spans[0].start_ms != 0:
        raise StyleCoverageError(f"first span starts at {spans[0].start_ms}, not 0")
    for prev, cur in zip(spans, spans[1:]):
        if prev.end_ms != cur.start_ms:
            raise StyleCoverageError(
                f"gap or overlap at {prev.end_ms}..{cur.start_ms}"
            )
    for s in spans:
        if s.start_ms >= s.end_ms:
            raise StyleCoverageError(f"empty span at {s.start_ms}")
    return spans


def style_at(spans: list[StyleSpan], t_ms: int) -> CourseStyle | None:
    for s in spans:
        if s.start_ms <= t_ms < s.end_ms:
            return s.style
    return None


def serialize_style_spans(spans: list[StyleSpan]) -> bytes:
    payload = {
        "spans": [
            {"start_ms": s.start_ms, "end_ms": s.end_ms, "style": s.style.value}
            for s in spans
        ]
    }
    return json.dumps(payload, ensure_ascii=True, sort_keys=True).encode("utf-8")
