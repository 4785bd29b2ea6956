"""Greedy one-to-one matching of predictions against gold labels."""

from __future__ import annotations

from ctt.segmentation.refine import title_overlap
from ctt.slidestruct.tree import SlideTree, SlideTreeNode


def temporal_iou(a: tuple[int, int], b: tuple[int, int]) -> float:
    inter = max(0, min(a[1], b[1]) - max(a[0], b[0]))
    union = max(a[1], b[1]) - min(a[0], b[0])
    if union <= 0:
        return 0.0
    return inter / union


def match_propositions(
    pred: list[tuple[str, int, int]],
    gold: list[tuple[str, int, int]],
    min_overlap: float = 0.5,
    min_iou: float = 0.5,
) -> list[tuple[int, int, float]]:
    """Match (title, start, end) triples one-to-one.

    A pair is eligible when the normalized-title word overlap and the
    temporal IoU both reach their thresholds (inclusive); the pair score
    is their mean.  Matching is greedy by descending score, which is
    exact on small lists and near-exact in practice.
    """
    scored = []
    for i, (pt, ps, pe) in enumerate(pred):
        for j, (gt, gs, ge) in enumerate(gold):
            overlap = title_overlap(pt, gt)
            iou = temporal_iou((ps, pe), (gs, ge))
            if overlap >= min_overlap and iou >= min_iou:
                scored.append(((overlap + iou) / 2.0, i, j))
    scored.sort(key=lambda t: (-t[0], t[1], t[2]))
    used_pred: set[int] = set()
    used_gold: set[int] = set()
    matches = []
    for score, i, j in scored:
        if i in used_pred or j in used_gold:
            continue
        used_pred.add(i)
        used_gold.add(j)
        matches.append((i, j, score))
    return matches


def match_points(
    pred: list[tuple[str, int]],
    gold: list[tuple[str, int]],
    min_overlap: float = 0.5,
    tolerance_ms: int = 5000,
) -> list[tuple[int, int, float]]:
    """Match (title, at_ms) pairs: title overlap plus a time tolerance."""
    scored = []
    for i, (pt, pm) in enumerate(pred):
        for j, (gt, gm) in enumerate(gold):
            if abs(pm - gm) > tolerance_ms:
                continue
            overlap = title_overlap(pt, gt)
            if overlap >= min_overlap:
                closeness = 1.0 - abs(pm - gm) / max(tolerance_ms, 1)
                scored.append(((overlap + closeness) / 2.0, i, j))
    scored.sort(key=lambda t: (-t[0], t[1], t[2]))
    used_pred: set[int] = set()
    used_gold: set[int] = set()
    matches = []
    for score, i, j in scored:
        if i in used_pred or j in used_gold:
            continue
        used_pred.add(i)
        used_gold.add(j)
        matches.append((i, j, score))
    return matches


def match_frames(
    pred: list[int], gold: list[int], tolerance: int = 2
) -> list[tuple[int, int, float]]:
    """Match boundary frame indices within a frame tolerance."""
    scored = []
    for i, p in enumerate(pred):
        for j, g in enumerate(gold):
            dist = abs(p - g)
            if dist <= tolerance:
                scored.append((1.0 - dist / (tolerance + 1), i, j))
    scored.sort(key=lambda t: (-t[0], t[1], t[2]))
    used_pred: set[int] = set()
    used_gold: set[int] = set()
    matches = []
    for score, i, j in scored:
        if i in used_pred or j in used_gold:
            continue
        used_pred.add(i)
        used_gold.add(j)
        matches.append((i, j, score))
    return matches


def match_tree(
    pred: SlideTree, gold: SlideTree, min_overlap: float = 0.5
) -> list[tuple[SlideTreeNode, SlideTreeNode, float]]:
    """Match tree nodes level by level under matched parents.

    A node pair is eligible when the text overlap reaches the threshold
    and both nodes sit at the same depth; children may only match under
    parents that matched, which keeps the matching structurally
    consistent.
    """
    matches: list[tuple[SlideTreeNode, SlideTreeNode, float]] = []

    def recurse(p_parent: SlideTreeNode, g_parent: SlideTreeNode) -> None:
        scored = []
        for i, p in enumerate(p_parent.children):
            for j, g in enumerate(g_parent.children):
                overlap = title_overlap(p.text, g.text)
                if overlap >= min_overlap:
                    scored.append((overlap, i, j))
        scored.sort(key=lambda t: (-t[0], t[1], t[2]))
        used_p: set[int] = set()
        used_g: set[int] = set()
        for score, i, j in scored:
            if i in used_p or j in used_g:
                continue
            used_p.add(i)
            used_g.add(j)
            matches.append((p_parent.children[i], g_parent.children[j], score))
            recurse(p_parent.children[i], g_parent.children[j])

    recurse(pred.root, gold.root)
    return matches


def count_nodes(tree: SlideTree) -> int:
    return len(tree.nodes()) - 1  # the synthetic root is not a label
