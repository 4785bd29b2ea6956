"""Slide hierarchy from indentation, plus concept-phrase flagging."""

from __future__ import annotations

import json
import statistics
from collections import Counter
from dataclasses import dataclass, field

from ctt.slidestruct.layout import SlideParagraph

CONCEPT_PUNCTUATION = (":", ".", ",")


@dataclass
class SlideTreeNode:
    text: str
    depth: int
    span_ms: tuple[int, int]
    concept_phrase: bool = False
    children: list["SlideTreeNode"] = field(default_factory=list)

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass
class SlideTree:
    root: SlideTreeNode

    def nodes(self) -> list[SlideTreeNode]:
        return list(self.root.walk())

    def to_dict(self) -> dict:
        def encode(node: SlideTreeNode) -> dict:
            return {
                "text": node.text,
                "depth": node.depth,
                "span_ms": list(node.span_ms),
                "concept_phrase": node.concept_phrase,
                "children": [encode(c) for c in node.children],
            }

        return encode(self.root)

    def to_json(self) -> bytes:
        return json.dumps(self.to_dict(), ensure_ascii=True, sort_keys=True).encode(
            "utf-8"
        )

    @staticmethod
    def from_dict(payload: dict) -> "SlideTree":
        def decode(raw: dict) -> SlideTreeNode:
            return SlideTreeNode(
                text=str(raw["text"]),
                depth=int(raw["depth"]),
                span_ms=(int(raw["span_ms"][0]), int(raw["span_ms"][1])),
                concept_phrase=bool(raw.get("concept_phrase", False)),
                children=[decode(c) for c in raw.get("children", [])],
            )

        return SlideTree(root=decode(payload))


def _indent_levels(indents: list[float], quantum: float) -> dict[float, int]:
    """Quantize raw indents into depth levels; gaps over the quantum split."""
    levels: dict[float, int] = {}
    level = 1
    prev: float | None = None
    for indent in sorted(set(indents)):
        if prev is not None and indent - prev > quantum:
            level += 1
        levels[indent] = level
        prev = indent
    return levels


def _is_concept_phrase(
    paragraph: SlideParagraph,
    typical_font: float,
    typical_color: tuple[int, int, int],
) -> bool:
    if paragraph.bold or paragraph.italic or paragraph.underline:
        return True
    if typical_font > 0 and abs(paragraph.font_size - typical_font) > 0.10 * typical_font:
        return True
    if paragraph.color != typical_color:
        return True
    return paragraph.text.rstrip().endswith(CONCEPT_PUNCTUATION)


def build_slide_tree(
    paragraphs: list[SlideParagraph],
    headline: SlideParagraph | None,
    span_ms: tuple[int, int] = (0, 0),
    indent_quantum: float = 20.0,
) -> SlideTree:
    """Assemble a slide's paragraph hierarchy.

    The headline is the root.  Body depths come from quantized
    indentation; each paragraph hangs off the most recent shallower
    paragraph, and in-order traversal preserves top-to-bottom reading
    order.  Concept phrases are flagged on text styling (bold, italic,
    underline), font-size or color deviation from the slide's body mode,
    or a trailing punctuation cue.
    """
    root = SlideTreeNode(
        text=headline.text if headline else "",
        depth=0,
        span_ms=span_ms,
        concept_phrase=False,
    )
    body = [p for p in paragraphs if headline is None or p != headline]
    body = sorted(body, key=lambda p: (p.y, p.x))
    if not body:
        return SlideTree(root=root)

    levels = _indent_levels([p.indent_px for p in body], indent_quantum)
    typical_font = statistics.median(p.font_size for p in body)
    typical_color = Counter(p.color for p in body).most_common(1)[0][0]

    stack: list[SlideTreeNode] = [root]
    for p in body:
        depth = levels[p.indent_px]
        node = SlideTreeNode(
            text=p.text,
            depth=depth,
            span_ms=span_ms,
            concept_phrase=_is_concept_phrase(p, typical_font, typical_color),
        )
        while stack and stack[-1].depth >= depth:
            stack.pop()
        parent = stack[-1] if stack else root
        # A jump of more than one level still nests directly under the
        # last shallower node; depth is normalized to parent + 1.
        node.depth = parent.depth + 1
        parent.children.append(node)
        stack.append(node)
    return SlideTree(root=root)
