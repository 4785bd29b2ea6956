"""Scoring pipeline outputs against ground-truth labels."""

from ctt.evalkit.metrics import F1Check, check_reported_f1, prf
from ctt.evalkit.matching import (
    match_propositions,
    match_tree,
    temporal_iou,
)
from ctt.evalkit.report import (
    EvalReport,
    EvalStage,
    GroundTruth,
    evaluate_all,
    load_ground_truth,
)

__all__ = [
    "EvalReport",
    "EvalStage",
    "F1Check",
    "GroundTruth",
    "check_reported_f1",
    "evaluate_all",
    "load_ground_truth",
    "match_propositions",
    "match_tree",
    "prf",
    "temporal_iou",
]
