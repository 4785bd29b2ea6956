"""Per-stage evaluation reports against ground truth."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from ctt.evalkit.matching import (
    count_nodes,
    match_frames,
    match_points,
    match_propositions,
    match_tree,
)
from ctt.evalkit.metrics import prf
from ctt.slidestruct.tree import SlideTree


class EvalStage(Enum):
    SHOTS = "shots"
    HEADLINES = "headlines"
    SLIDE_STRUCTURE = "slide_structure"
    PROPOSITIONS = "propositions"
    PROPOSITIONS_NO_SLIDES = "propositions_no_slides"


@dataclass(frozen=True)
class GroundTruth:
    video_id: str
    propositions: list[tuple[str, int, int]] = field(default_factory=list)
    headlines: list[tuple[str, int]] = field(default_factory=list)
    slide_tree: SlideTree | None = None
    shot_boundaries: list[int] = field(default_factory=list)


@dataclass(frozen=True)
class EvalReport:
    stage: EvalStage
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float
    match_detail: tuple[tuple[str, str, float], ...] = ()

    def to_dict(self) -> dict:
        return {
            "stage": self.stage.value,
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "match_detail": [list(m) for m in self.match_detail],
        }


def _report(
    stage: EvalStage,
    n_pred: int,
    n_gold: int,
    matches: list[tuple[str, str, float]],
) -> EvalReport:
    tp = len(matches)
    fp = n_pred - tp
    fn = n_gold - tp
    precision, recall, f1 = prf(tp, fp, fn)
    return EvalReport(
        stage=stage,
        tp=tp,
        fp=fp,
        fn=fn,
        precision=precision,
        recall=recall,
        f1=f1,
        match_detail=tuple(matches),
    )


@dataclass(frozen=True)
class PipelineOutputs:
    """The predicted artifacts one evaluation run scores."""

    propositions: list[tuple[str, int, int]] = field(default_factory=list)
    propositions_no_slides: list[tuple[str, int, int]] | None = None
    headlines: list[tuple[str, int]] = field(default_factory=list)
    slide_tree: SlideTree | None = None
    shot_boundaries: list[int] = field(default_factory=list)


def evaluate_all(
    outputs: PipelineOutputs,
    gt: GroundTruth,
    shot_tolerance_frames: int = 2,
    headline_tolerance_ms: int = 5000,
) -> list[EvalReport]:
    """One report per stage that has either predictions or gold labels."""
    reports = []

    if outputs.shot_boundaries or gt.shot_boundaries:
        matches = match_frames(
            outputs.shot_boundaries, gt.shot_boundaries, shot_tolerance_frames
        )
        detail = [
            (str(outputs.shot_boundaries[i]), str(gt.shot_boundaries[j]), s)
            for i, j, s in matches
        ]
        reports.append(
            _report(
                EvalStage.SHOTS,
                len(outputs.shot_boundaries),
                len(gt.shot_boundaries),
                detail,
            )
        )

    if outputs.headlines or gt.headlines:
        matches = match_points(
            outputs.headlines, gt.headlines, tolerance_ms=headline_tolerance_ms
        )
        detail = [
            (outputs.headlines[i][0], gt.headlines[j][0], s) for i, j, s in matches
        ]
        reports.append(
            _report(
                EvalStage.HEADLINES,
                len(outputs.headlines),
                len(gt.headlines),
                detail,
            )
        )

    if outputs.slide_tree is not None and gt.slide_tree is not None:
        matches = match_tree(outputs.slide_tree, gt.slide_tree)
        detail = [(p.text, g.text, s) for p, g, s in matches]
        reports.append(
            _report(
                EvalStage.SLIDE_STRUCTURE,
                count_nodes(outputs.slide_tree),
                count_nodes(gt.slide_tree),
                detail,
            )
        )

    if outputs.propositions or gt.propositions:
        matches = match_propositions(outputs.propositions, gt.propositions)
        detail = [
            (outputs.propositions[i][0], gt.propositions[j][0], s)
            for i, j, s in matches
        ]
        reports.append(
            _report(
                EvalStage.PROPOSITIONS,
                len(outputs.propositions),
                len(gt.propositions),
                detail,
            )
        )

    if outputs.propositions_no_slides is not None:
        matches = match_propositions(outputs.propositions_no_slides, gt.propositions)
        detail = [
            (outputs.propositions_no_slides[i][0], gt.propositions[j][0], s)
            for i, j, s in matches
        ]
        reports.append(
            _report(
                EvalStage.PROPOSITIONS_NO_SLIDES,
                len(outputs.propositions_no_slides),
                len(gt.propositions),
                detail,
            )
        )
    return reports


def load_ground_truth(path: Path) -> GroundTruth:
    """Load one video's ground truth JSON."""
    payload = json.loads(path.read_text(encoding="utf-8"))
    tree = None
    if payload.get("slide_tree") is not None:
        tree = SlideTree.from_dict(payload["slide_tree"])
    return GroundTruth(
        video_id=str(payload["video_id"]),
        propositions=[
            (str(p["title"]), int(p["start_ms"]), int(p["end_ms"]))
            for p in payload.get("propositions", [])
        ],
        headlines=[
            (str(h["title"]), int(h["start_ms"]))
            for h in payload.get("headlines", [])
        ],
        slide_tree=tree,
        shot_boundaries=[int(i) for i in payload.get("shot_boundaries", [])],
    )


def reports_to_tsv(reports: list[EvalReport]) -> str:
    lines = ["stage\ttp\tfp\tfn\tprecision\trecall\tf1"]
    for r in reports:
        lines.append(
            f"{r.stage.value}\t{r.tp}\t{r.fp}\t{r.fn}"
            f"\t{r.precision:.4f}\t{r.recall:.4f}\t{r.f1:.4f}"
        )
    return "\n".join(lines) + "\n"
