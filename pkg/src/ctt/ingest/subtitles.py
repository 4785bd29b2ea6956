"""Subtitle parsing for SRT, WebVTT and plain timed JSON."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum

from ctt.errors import EmptyInput, MalformedTimestamp


class SubtitleFormat(Enum):
    SRT = "srt"
    VTT = "vtt"
    PLAIN_TIMED_JSON = "plain_timed_json"


@dataclass(frozen=True)
class TranscriptSegment:
    """One timestamped utterance; the substrate for all text analysis."""

    index: int
    start_ms: int
    end_ms: int
    text: str

    def __post_init__(self) -> None:
        if self.start_ms >= self.end_ms:
            raise MalformedTimestamp(
                f"segment {self.index}: start {self.start_ms} >= end {self.end_ms}"
            )


_SRT_TIME = re.compile(r"^(\d{1,2}):(\d{2}):(\d{2})[,.](\d{3})$")
_VTT_TIME = re.compile(r"^(?:(\d{1,2}):)?(\d{2}):(\d{2})\.(\d{3})$")


def _parse_srt_time(raw: str) -> int:
    m = _SRT_TIME.match(raw.strip())
    if not m:
        raise MalformedTimestamp(f"bad SRT cue time: {raw!r}")
    h, mi, s, ms = (int(g) for g in m.groups())
    return ((h * 60 + mi) * 60 + s) * 1000 + ms


def _parse_vtt_time(raw: str) -> int:
    m = _VTT_TIME.match(raw.strip())
    if not m:
        raise MalformedTimestamp(f"bad VTT cue time: {raw!r}")
    h = int(m.group(1) or 0)
    mi, s, ms = int(m.group(2)), int(m.group(3)), int(m.group(4))
    return ((h * 60 + mi) * 60 + s) * 1000 + ms


def _parse_srt(text: str) -> list[tuple[int, int, str]]:
    cues = []
    for block in re.split(r"\n\s*\n", text.strip()):
        lines = [ln for ln in block.splitlines() if ln.strip()]
        if not lines:
            continue
        # Optional numeric counter line before the timing line.
        if "-->" not in lines[0]:
            lines = lines[1:]
        if not lines or "-->" not in lines[0]:
            raise MalformedTimestamp(f"SRT block without timing line: {block!r}")
        start_raw, _, end_raw = lines[0].partition("-->")
        start = _parse_srt_time(start_raw)
        end = _parse_srt_time(end_raw)
        cues.append((start, end, " ".join(ln.strip() for ln in lines[1:])))
    return cues


def _parse_vtt(text: str) -> list[tuple[int, int, str]]:
    body = text.lstrip("﻿")
    if not body.startswith("WEBVTT"):
        raise MalformedTimestamp("missing WEBVTT header")
    cues = []
    blocks = re.split(r"\n\s*\n", body)[1:]  # drop header block
    for block in blocks:
        lines = [ln for ln in block.splitlines() if ln.strip()]
        if not lines or lines[0].startswith(("NOTE", "STYLE", "REGION")):
            continue
        if "-->" not in lines[0]:
            lines = lines[1:]  # cue identifier line
        if not lines:
            continue
        if "-->" not in lines[0]:
            raise MalformedTimestamp(f"VTT block without timing line: {block!r}")
        timing = lines[0].split("-->")
        start = _parse_vtt_time(timing[0])
        # Cue settings may trail the end time.
        end = _parse_vtt_time(timing[1].strip().split(" ")[0])
        cues.append((start, end, " ".join(ln.strip() for ln in lines[1:])))
    return cues


def _parse_plain_json(text: str) -> list[tuple[int, int, str]]:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedTimestamp(f"invalid JSON transcript: {exc}") from exc
    cues = []
    for i, seg in enumerate(payload.get("segments", [])):
        try:
            cues.append((int(seg["start_ms"]), int(seg["end_ms"]), str(seg["text"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedTimestamp(f"segment {i}: {exc}") from exc
    return cues


def parse_transcript(data: bytes, fmt: SubtitleFormat) -> list[TranscriptSegment]:
    """Parse subtitle bytes into sorted, merged, validated segments.

    Overlapping cues are merged by concatenating their texts with a single
    space; lecture SRTs overlap routinely.  Indices are reassigned 0..n-1
    after sorting and merging.
    """
    text = data.decode("utf-8")
    if fmt is SubtitleFormat.SRT:
        cues = _parse_srt(text)
    elif fmt is SubtitleFormat.VTT:
        cues = _parse_vtt(text)
    else:
        cues = _parse_plain_json(text)

    if not cues:
        raise EmptyInput("no cues found")
    for start, end, _ in cues:
        if start >= end:
            raise MalformedTimestamp(f"cue start {start} >= end {end}")

    cues.sort(key=lambda c: (c[0], c[1]))
    merged: list[list] = []
    for start, end, txt in cues:
        if merged and start < merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], end)
            merged[-1][2] = f"{merged[-1][2]} {txt}".strip()
        else:
            merged.append([start, end, txt])

    return [
        TranscriptSegment(index=i, start_ms=s, end_ms=e, text=t)
        for i, (s, e, t) in enumerate(merged)
    ]


def serialize_transcript(segments: list[TranscriptSegment]) -> bytes:
    """Serialize to the plain timed JSON format (round-trip identity)."""
    payload = {
        "segments": [
            {"start_ms": s.start_ms, "end_ms": s.end_ms, "text": s.text}
            for s in segments
        ]
    }
    return json.dumps(payload, ensure_ascii=True, sort_keys=True).encode("utf-8")
