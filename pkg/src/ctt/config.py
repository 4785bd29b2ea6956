"""Pipeline configuration: one flat structure, loaded from TOML."""

from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


@dataclass
class PipelineConfig:
    # inputs
    video_id: str = "video"
    transcript_path: str = ""
    transcript_format: str = "srt"  # srt | vtt | plain_timed_json
    frame_signatures_path: str = ""
    slide_ocr_path: str = ""
    style_spans_path: str = ""
    embeddings_path: str = ""
    duration_ms: int = 0  # 0 = infer from inputs

    # outputs
    store_dir: str = "store"

    # tokenization
    stopwords_path: str = ""  # empty = packaged English list
    stemmer: str = "porter/1980"

    # keyphrase ranking
    cooccurrence_window: int = 4
    damping: float = 0.85
    rank_tol: float = 1e-6
    rank_max_iters: int = 100
    top_k_keyphrases: int = 30

    # segmentation
    window_ms: int = 5000
    lam: float = 0.7
    persistence: int = 2
    snap_tolerance_ms: int = 10_000
    theta_title: float = 0.5
    max_topics: int = 8

    # slide structure
    kappa: float = 2.0
    tau_edge: float = 0.05
    indent_quantum: float = 20.0

    # concept graph
    theta_sim: float = 0.7
    concepts_per_proposition: int = 5
    example_cues: tuple[str, ...] = (
        "for example",
        "for instance",
        "as an example",
    )
    test_cues: tuple[str, ...] = ("quiz", "test yourself", "exercise for you")

    # scoring
    alpha: float = 0.5
    sparkline_bin_ms: int = 60_000
    pagerank_damping: float = 0.85
    pagerank_tol: float = 1e-9

    # evaluation
    shot_tolerance_frames: int = 2
    headline_tolerance_ms: int = 5000

    extra_provenance: dict[str, str] = field(default_factory=dict)

    def config_hash(self) -> str:
        """Hash of every analysis-affecting knob, for provenance."""
        payload = {}
        for f in fields(self):
            if f.name in ("store_dir", "extra_provenance"):
                continue
            value = getattr(self, f.name)
            payload[f.name] = list(value) if isinstance(value, tuple) else value
        payload.update(self.extra_provenance)
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def load_config(path: Path) -> PipelineConfig:
    """Read a TOML config; unknown keys are rejected early."""
    with open(path, "rb") as fh:
        raw = tomllib.load(fh)
    known = {f.name for f in fields(PipelineConfig)}
    # TOML spells the blend weight "lambda"; the dataclass cannot.
    if "lambda" in raw:
        raw["lam"] = raw.pop("lambda")
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    for key in ("example_cues", "test_cues"):
        if key in raw:
            raw[key] = tuple(raw[key])
    return PipelineConfig(**raw)
