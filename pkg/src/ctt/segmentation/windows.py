"""Fixed-width time windows with per-window term vectors."""

from __future__ import annotations

from dataclasses import dataclass, field

from ctt.errors import EmptyStream
from ctt.ingest.tokens import TokenStream


@dataclass
class TopicWindow:
    index: int
    start_ms: int
    end_ms: int
    term_vector: dict[str, float] = field(default_factory=dict)
    topic_weights: dict[str, float] = field(default_factory=dict)


def window_transcript(stream: TokenStream, window_ms: int = 5000) -> list[TopicWindow]:
    """Slice the stream into consecutive windows of ``window_ms``.

    Windows cover [first token start, last token end]; the final window
    is kept even when partial so the windows tile the transcript span.
    A token belongs to the window containing its start time.  Term
    vectors count non-stopword stems.
    """
    if window_ms <= 0:
        raise ValueError("window_ms must be positive")
    if not stream.tokens:
        raise EmptyStream("cannot window an empty token stream")

    span_start = stream.start_ms
    span_end = stream.end_ms
    windows: list[TopicWindow] = []
    start = span_start
    index = 0
    while start < span_end:
        end = min(start + window_ms, span_end)
        windows.append(TopicWindow(index=index, start_ms=start, end_ms=end))
        start = end
        index += 1
    if not windows:  # all tokens at a single instant
        windows.append(TopicWindow(index=0, start_ms=span_start, end_ms=span_end))

    for tok in stream.content_tokens():
        slot = min((tok.start_ms - span_start) // window_ms, len(windows) - 1)
        vec = windows[slot].term_vector
        vec[tok.stem] = vec.get(tok.stem, 0.0) + 1.0
    return windows
