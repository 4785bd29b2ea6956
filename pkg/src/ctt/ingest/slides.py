"""Slide OCR parsing: per-frame word bounding boxes with styling."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ctt.errors import DuplicateBoxId, OutOfBounds

STYLE_FLAGS = frozenset({"bold", "italic", "underline"})


@dataclass(frozen=True)
class TextBox:
    box_id: str
    frame_index: int
    x: float
    y: float
    width: float
    height: float
    text: str
    font_size: float
    color: tuple[int, int, int]
    style_flags: frozenset[str] = field(default_factory=frozenset)
    is_handwritten: bool = False


@dataclass(frozen=True)
class SlideOcr:
    """Parsed OCR dump: frame dimensions plus boxes keyed by frame index."""

    frame_w: float
    frame_h: float
    frames: dict[int, list[TextBox]]


def parse_slide_ocr(data: bytes) -> SlideOcr:
    """Parse `{"frame_w", "frame_h", "frames": {"<idx>": [box, ...]}}`.

    Box ids must be unique across the whole file and every box must lie
    within the declared frame bounds.
    """
    payload = json.loads(data.decode("utf-8"))
    frame_w = float(payload["frame_w"])
    frame_h = float(payload["frame_h"])
    seen_ids: set[str] = set()
    frames: dict[int, list[TextBox]] = {}
    for key, raw_boxes in payload.get("frames", {}).items():
        idx = int(key)
        boxes = []
        for raw in raw_boxes:
            box = TextBox(
                box_id=str(raw["box_id"]),
                frame_index=idx,
                x=float(raw["x"]),
                y=float(raw["y"]),
                width=float(raw["width"]),
                height=float(raw["height"]),
                text=str(raw["text"]),
                font_size=float(raw["font_size"]),
                color=tuple(int(c) for c in raw["color"]),
                style_flags=frozenset(raw.get("style_flags", [])) & STYLE_FLAGS,
                is_handwritten=bool(raw.get("is_handwritten", False)),
            )
            if box.box_id in seen_ids:
                raise DuplicateBoxId(f"duplicate box_id {box.box_id!r}")
            seen_ids.add(box.box_id)
            if box.width <= 0 or box.height <= 0:
                raise OutOfBounds(f"box {box.box_id}: non-positive extent")
            if (
                box.x < 0
                or box.y < 0
                or box.x + box.width > frame_w
                or box.y + box.height > frame_h
            ):
                raise OutOfBounds(
                    f"box {box.box_id}: outside {frame_w}x{frame_h} frame"
                )
            boxes.append(box)
        frames[idx] = boxes
    return SlideOcr(frame_w=frame_w, frame_h=frame_h, frames=frames)


def serialize_slide_ocr(ocr: SlideOcr) -> bytes:
    payload = {
        "frame_w": ocr.frame_w,
        "frame_h": ocr.frame_h,
        "frames": {
            str(idx): [
                {
                    "box_id": b.box_id,
                    "x": b.x,
                    "y": b.y,
                    "width": b.width,
                    "height": b.height,
                    "text": b.text,
                    "font_size": b.font_size,
                    "color": list(b.color),
                    "style_flags": sorted(b.style_flags),
                    "is_handwritten": b.is_handwritten,
                }
                for b in boxes
            ]
            for idx, boxes in sorted(ocr.frames.items())
        },
    }
    return json.dumps(payload, ensure_ascii=True, sort_keys=True).encode("utf-8")
