"""Precision, recall, F1 and reported-value consistency checks."""

from __future__ import annotations

from dataclasses import dataclass


def prf(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    """Precision, recall and their harmonic mean.

    Empty-task convention: with nothing predicted and nothing expected
    (tp = fp = fn = 0) all three metrics are 1.0; a zero tp with any
    fp or fn scores 0 on the affected metric.
    """
    if tp == 0 and fp == 0 and fn == 0:
        return 1.0, 1.0, 1.0
    precision = tp / (tp + fp) if (tp + fp) > 0 else (1.0 if fn == 0 else 0.0)
    recall = tp / (tp + fn) if (tp + fn) > 0 else (1.0 if fp == 0 else 0.0)
    if precision + recall == 0.0:
        return precision, recall, 0.0
    f1 = 2.0 * precision * recall / (precision + recall)
    return precision, recall, f1


@dataclass(frozen=True)
class F1Check:
    precision: float
    recall: float
    reported_f1: float
    recomputed_f1: float
    deviation: float
    flagged: bool


def check_reported_f1(
    precision: float, recall: float, reported_f1: float, tol: float = 0.005
) -> F1Check:
    """Recompute F1 from a reported (P, R) pair and flag inconsistencies.

    A reported row whose printed F1 deviates from the harmonic mean by
    more than ``tol`` is flagged, never silently accepted.
    """
    if precision + recall == 0.0:
        recomputed = 0.0
    else:
        recomputed = 2.0 * precision * recall / (precision + recall)
    deviation = abs(recomputed - reported_f1)
    return F1Check(
        precision=precision,
        recall=recall,
        reported_f1=reported_f1,
        recomputed_f1=recomputed,
        deviation=deviation,
        flagged=deviation > tol,
    )
