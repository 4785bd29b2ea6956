from __future__ import annotations

import random

import pytest

from ctt.evalkit import (
    EvalStage,
    check_reported_f1,
    evaluate_all,
    match_propositions,
    match_tree,
    prf,
    temporal_iou,
)
from ctt.evalkit.report import GroundTruth, PipelineOutputs
from ctt.slidestruct.tree import SlideTree, SlideTreeNode

from oracles import optimal_assignment_score


# ── prf ─────────────────────────────────────────────────────────────

def test_prf_formula_oracle():
    p, r, f1 = prf(8, 2, 4)
    assert p == pytest.approx(0.8)
    assert r == pytest.approx(0.6667, abs=1e-4)
    assert f1 == pytest.approx(0.7273, abs=1e-4)


def test_prf_empty_task_convention():
    assert prf(0, 0, 0) == (1.0, 1.0, 1.0)


def test_prf_zero_tp_with_fp():
    p, r, f1 = prf(0, 3, 0)
    assert p == 0.0
    assert f1 == 0.0


def test_f1_consistency_within_1e9():
    p, r, f1 = prf(13, 7, 9)
    assert f1 == pytest.approx(2 * p * r / (p + r), abs=1e-9)


# ── reported-row checks (printed P/R/F1 triples) ────────────────────

def test_reported_row_sbd_consistent():
    check = check_reported_f1(0.932, 0.893, 0.909)
    assert check.recomputed_f1 == pytest.approx(0.9121, abs=1e-4)
    assert not check.flagged


def test_reported_row_inconsistent_is_flagged():
    check = check_reported_f1(0.878, 0.901, 0.868)
    assert check.recomputed_f1 == pytest.approx(0.8894, abs=1e-4)
    assert check.flagged  # deviation 0.021 > 0.005


# ── proposition matching ────────────────────────────────────────────

def test_identical_lists_perfect_score():
    items = [("intro", 0, 30000), ("sorting", 30000, 90000)]
    matches = match_propositions(items, items)
    assert len(matches) == 2
    assert all(score == pytest.approx(1.0) for _, _, score in matches)


def test_low_iou_unmatched():
    # IoU arithmetic oracle: shift so intersection/union = 0.4.
    pred = [("topic", 0, 40000)]
    gold = [("topic", 30000, 70000)]
    iou = temporal_iou((0, 40000), (30000, 70000))
    assert iou == pytest.approx(10000 / 70000)
    assert match_propositions(pred, gold) == []


def test_threshold_is_inclusive():
    # Title overlap exactly 0.5 with high IoU still matches.
    pred = [("hash tables", 0, 100000)]
    gold = [("hash buckets", 0, 90000)]
    # stems: {hash, tabl} vs {hash, bucket}: overlap 1/3 < 0.5 -> craft 0.5.
    pred = [("hash tables intro", 0, 100000)]
    gold = [("hash tables analysis", 0, 90000)]
    matches = match_propositions(pred, gold)
    assert len(matches) == 1
    assert temporal_iou((0, 100000), (0, 90000)) == pytest.approx(0.9)


def test_matching_is_one_to_one():
    pred = [("alpha", 0, 10000), ("alpha", 0, 10000)]
    gold = [("alpha", 0, 10000)]
    matches = match_propositions(pred, gold)
    assert len(matches) == 1


def test_greedy_close_to_optimal_small():
    rng = random.Random(21)
    for _ in range(50):
        n_pred = rng.randint(0, 6)
        n_gold = rng.randint(0, 6)
        pred = [
            (rng.choice(["a", "b", "c"]), i * 10000, i * 10000 + 9000)
            for i in range(n_pred)
        ]
        gold = [
            (rng.choice(["a", "b", "c"]), i * 10000, i * 10000 + 9000)
            for i in range(n_gold)
        ]
        matches = match_propositions(pred, gold)
        eligible = {}
        for i, p in enumerate(pred):
            for j, g in enumerate(gold):
                trial = match_propositions([p], [g])
                if trial:
                    eligible[(i, j)] = trial[0][2]
        best = optimal_assignment_score(eligible, n_pred, n_gold)
        # Same-position pairs share identical scores here, so greedy
        # matches the exhaustive optimum exactly.
        assert len(matches) == best


# ── tree matching ───────────────────────────────────────────────────

def _tree(spec) -> SlideTree:
    def build(node, depth):
        text, children = node
        return SlideTreeNode(
            text=text,
            depth=depth,
            span_ms=(0, 1000),
            children=[build(c, depth + 1) for c in children],
        )

    return SlideTree(root=build(("", spec), 0))


def test_tree_identical_all_match():
    spec = [("chaining", [("buckets", [])]), ("load factor", [])]
    matches = match_tree(_tree(spec), _tree(spec))
    assert len(matches) == 3
    assert all(s == pytest.approx(1.0) for _, _, s in matches)


def test_tree_child_only_under_matched_parent():
    pred = _tree([("chaining", [("buckets", [])])])
    gold = _tree([("probing", [("buckets", [])])])
    matches = match_tree(pred, gold)
    # Roots' children differ ("chaining" vs "probing"): nothing matches,
    # including the identical grandchild.
    assert matches == []


def test_tree_depth_must_agree():
    pred = _tree([("chaining", []), ("buckets", [])])
    gold = _tree([("chaining", [("buckets", [])])])
    matches = match_tree(pred, gold)
    assert len(matches) == 1  # only "chaining"; "buckets" depth differs


# ── evaluate_all ────────────────────────────────────────────────────

def test_evaluate_identical_inputs_all_ones():
    tree = _tree([("chaining", [("buckets", [])])])
    gt = GroundTruth(
        video_id="v",
        propositions=[("hash tables", 0, 60000)],
        headlines=[("hash tables", 1000)],
        slide_tree=tree,
        shot_boundaries=[10, 20],
    )
    outputs = PipelineOutputs(
        propositions=[("hash tables", 0, 60000)],
        headlines=[("hash tables", 1000)],
        slide_tree=tree,
        shot_boundaries=[10, 20],
    )
    reports = {r.stage: r for r in evaluate_all(outputs, gt)}
    for stage in (
        EvalStage.SHOTS,
        EvalStage.HEADLINES,
        EvalStage.SLIDE_STRUCTURE,
        EvalStage.PROPOSITIONS,
    ):
        r = reports[stage]
        assert (r.precision, r.recall, r.f1) == (1.0, 1.0, 1.0)


def test_evaluate_shot_tolerance():
    gt = GroundTruth(video_id="v", shot_boundaries=[10, 50])
    outputs = PipelineOutputs(shot_boundaries=[11, 80])
    reports = {r.stage: r for r in evaluate_all(outputs, gt)}
    shots = reports[EvalStage.SHOTS]
    assert shots.tp == 1 and shots.fp == 1 and shots.fn == 1
    assert shots.precision == pytest.approx(0.5)


def test_evaluate_no_slides_variant_reported():
    gt = GroundTruth(video_id="v", propositions=[("a", 0, 10000)])
    outputs = PipelineOutputs(
        propositions=[("a", 0, 10000)],
        propositions_no_slides=[("b", 0, 10000)],
    )
    reports = {r.stage: r for r in evaluate_all(outputs, gt)}
    assert reports[EvalStage.PROPOSITIONS].f1 == 1.0
    assert reports[EvalStage.PROPOSITIONS_NO_SLIDES].f1 == 0.0
