"""Two-stage shot boundary detection and slide final-state selection."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from ctt.errors import TooFewFrames
from ctt.ingest.frames import FrameSignature
from ctt.ingest.styles import CourseStyle, StyleSpan
from ctt.slidestruct.emd import emd_1d


class BoundaryStage(Enum):
    COARSE = "coarse"
    EDGE_REFINED = "edge_refined"


@dataclass(frozen=True)
class ShotBoundary:
    frame_index: int
    confidence: float
    stage: BoundaryStage


@dataclass(frozen=True)
class SlideShot:
    shot_id: int
    start_frame: int
    end_frame: int
    final_frame_index: int
    start_ms: int
    end_ms: int


def detect_shots(
    signatures: list[FrameSignature],
    kappa: float = 2.0,
    tau_edge: float = 0.05,
) -> list[ShotBoundary]:
    """Two-stage detection over the histogram-distance series.

    Stage 1 marks frame k as a candidate when the EMD between frames
    k-1 and k exceeds an adaptive threshold mean + kappa * sigma.  The
    statistics for each delta are taken over the other strictly positive
    deltas (leave-one-out): a single large jump must not inflate its own
    threshold, and zero deltas from repeated identical frames must not
    deflate it, which also makes the output invariant to appending
    identical trailing frames.  Stage 2 confirms a candidate only when
    the edge-density change also exceeds ``tau_edge``; gradual
    illumination shifts move the histogram but not the edges and are
    discarded here.  Confidence is the candidate's EMD excess over its
    threshold, normalized by the largest excess in the series.
    """
    if len(signatures) < 2:
        raise TooFewFrames("need at least two frame signatures")

    deltas = [
        emd_1d(a.histogram, b.histogram)
        for a, b in zip(signatures, signatures[1:])
    ]
    positive = [d for d in deltas if d > 0.0]

    candidates: list[tuple[int, float]] = []  # (signature index, excess)
    for k, delta in enumerate(deltas):
        if delta <= 0.0:
            continue
        rest = list(positive)
        rest.remove(delta)  # leave this delta out of its own statistics
        if rest:
            mu = sum(rest) / len(rest)
            var = sum((d - mu) ** 2 for d in rest) / len(rest)
            threshold = mu + kappa * math.sqrt(var)
        else:
            threshold = 0.0
        if delta > threshold:
            candidates.append((k + 1, delta - threshold))

    if not candidates:
        return []
    max_excess = max(excess for _, excess in candidates)

    boundaries = []
    for frame_pos, excess in candidates:
        edge_delta = abs(
            signatures[frame_pos].edge_density
            - signatures[frame_pos - 1].edge_density
        )
        if edge_delta <= tau_edge:
            continue
        boundaries.append(
            ShotBoundary(
                frame_index=signatures[frame_pos].frame_index,
                confidence=excess / max_excess if max_excess > 0 else 1.0,
                stage=BoundaryStage.EDGE_REFINED,
            )
        )
    return boundaries


def select_final_states(
    boundaries: list[ShotBoundary],
    signatures: list[FrameSignature],
    style_spans: list[StyleSpan] | None = None,
) -> list[SlideShot]:
    """Partition the slide-style frames into shots and pick final states.

    Slides accrete content, so the most complete view of a slide is its
    last frame before the next boundary.  Frames outside slides-style
    spans are excluded; a boundary splits a shot only when both sides
    remain within slide-style time.
    """
    if not signatures:
        return []

    def is_slide(sig: FrameSignature) -> bool:
        if style_spans is None:
            return True
        return any(
            s.style is CourseStyle.SLIDES and s.start_ms <= sig.timestamp_ms < s.end_ms
            for s in style_spans
        )

    boundary_frames = {b.frame_index for b in boundaries}
    shots: list[SlideShot] = []
    run: list[FrameSignature] = []

    def flush(run: list[FrameSignature]) -> None:
        if not run:
            return
        shots.append(
            SlideShot(
                shot_id=len(shots),
                start_frame=run[0].frame_index,
                end_frame=run[-1].frame_index,
                final_frame_index=run[-1].frame_index,
                start_ms=run[0].timestamp_ms,
                end_ms=run[-1].timestamp_ms,
            )
        )

    for sig in signatures:
        if not is_slide(sig):
            flush(run)
            run = []
            continue
        if run and sig.frame_index in boundary_frames:
            flush(run)
            run = []
        run.append(sig)
    flush(run)

    # A shot's time range extends to the next shot (or span end): the
    # final frame stays on screen until the cut.
    extended: list[SlideShot] = []
    for i, shot in enumerate(shots):
        end_ms = shot.end_ms
        if i + 1 < len(shots) and shots[i + 1].start_ms > shot.end_ms:
            end_ms = shots[i + 1].start_ms
        elif style_spans is not None:
            for s in style_spans:
                if s.start_ms <= shot.end_ms < s.end_ms:
                    if i + 1 == len(shots) or shots[i + 1].start_ms >= s.end_ms:
                        end_ms = s.end_ms
                    break
        extended.append(
            SlideShot(
                shot_id=shot.shot_id,
                start_frame=shot.start_frame,
                end_frame=shot.end_frame,
                final_frame_index=shot.final_frame_index,
                start_ms=shot.start_ms,
                end_ms=end_ms,
            )
        )
    return extended
