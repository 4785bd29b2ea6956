"""Frame signature parsing: per-frame grayscale histograms + edge density."""

from __future__ import annotations

import json
from dataclasses import dataclass

from ctt.errors import (
    EmptyInput,
    HistogramLengthMismatch,
    InvalidSignature,
    NegativeMass,
)

SUM_TOLERANCE = 1e-6


@dataclass(frozen=True)
class FrameSignature:
    frame_index: int
    timestamp_ms: int
    histogram: tuple[float, ...]
    edge_density: float


def parse_frame_signatures(data: bytes) -> list[FrameSignature]:
    """Parse a JSON-lines signature file.

    The first line is a header declaring ``histogram_bins`` and frame
    dimensions; every following line is one frame.  Histograms within
    1e-6 of unit mass are renormalized to sum to 1.0 exactly (within
    1e-9); anything further off, or any negative bin, is rejected.
    """
    lines = [ln for ln in data.decode("utf-8").splitlines() if ln.strip()]
    if not lines:
        raise EmptyInput("empty signature file")
    header = json.loads(lines[0])
    bins = int(header["histogram_bins"])

    signatures: list[FrameSignature] = []
    prev_ts: int | None = None
    for raw in lines[1:]:
        row = json.loads(raw)
        hist = [float(v) for v in row["histogram"]]
        if len(hist) != bins:
            raise HistogramLengthMismatch(
                f"frame {row.get('frame_index')}: {len(hist)} bins, expected {bins}"
            )
        if any(v < 0 for v in hist):
            raise NegativeMass(f"frame {row.get('frame_index')}: negative bin mass")
        total = sum(hist)
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise NegativeMass(
                f"frame {row.get('frame_index')}: histogram sums to {total!r}"
            )
        hist = [v / total for v in hist]
        edge = float(row["edge_density"])
        if not 0.0 <= edge <= 1.0:
            raise InvalidSignature(
                f"frame {row.get('frame_index')}: edge_density {edge} outside [0,1]"
            )
        ts = int(row["timestamp_ms"])
        if prev_ts is not None and ts <= prev_ts:
            raise InvalidSignature(
                f"frame {row.get('frame_index')}: timestamps not strictly increasing"
            )
        prev_ts = ts
        signatures.append(
            FrameSignature(
                frame_index=int(row["frame_index"]),
                timestamp_ms=ts,
                histogram=tuple(hist),
                edge_density=edge,
            )
        )
    if not signatures:
        raise EmptyInput("signature file has a header but no frames")
    return signatures


def serialize_frame_signatures(
    signatures: list[FrameSignature], frame_w: int = 0, frame_h: int = 0
) -> bytes:
    header = {
        "histogram_bins": len(signatures[0].histogram) if signatures else 0,
        "frame_w": frame_w,
        "frame_h": frame_h,
    }
    out = [json.dumps(header, sort_keys=True)]
    for s in signatures:
        out.append(
            json.dumps(
                {
                    "frame_index": s.frame_index,
                    "timestamp_ms": s.timestamp_ms,
                    "histogram": list(s.histogram),
                    "edge_density": s.edge_density,
                },
                sort_keys=True,
            )
        )
    return ("\n".join(out) + "\n").encode("utf-8")
