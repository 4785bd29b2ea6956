"""Navigation payload: sunburst arcs, bar chart series, theme river.

Every number the UI draws is computed here; the client only does
geometry.  Importance and relation counts ship as discrete quantile
classes so payloads are snapshot-testable.
"""

from __future__ import annotations

from ctt.conceptgraph.model import Concept, ConceptMap

FULL_CIRCLE = 360.0
N_IMPORTANCE_CLASSES = 5
N_RADIUS_CLASSES = 5


def quantile_class(value: float, values: list[float], n_classes: int) -> int:
    """Mid-rank quantile bin: constant series land in the middle class."""
    if not values:
        return 0
    ordered = sorted(values)
    lo = ordered.index(value)
    hi = len(ordered) - 1 - ordered[::-1].index(value)
    if len(ordered) == 1:
        frac = 0.5
    else:
        frac = (lo + hi) / 2.0 / (len(ordered) - 1)
    return min(n_classes - 1, int(frac * n_classes))


def _depth_of(concept: Concept, by_id: dict[str, Concept]) -> int:
    depth = 1
    cur = concept.parent_id
    while cur is not None:
        depth += 1
        cur = by_id[cur].parent_id if cur in by_id else None
    return depth


def navigation_payload(
    cmap: ConceptMap,
    style_spans: list[dict] | None = None,
    sparklines: dict[str, dict] | None = None,
) -> dict:
    """Assemble the payload behind the navigation endpoint.

    Sunburst rings share the video timeline: ring 0 holds propositions,
    ring d holds concepts at depth d, and gap arcs fill uncovered time so
    every ring's angles sum to exactly 360 degrees.  An arc's angle over
    its parent's angle therefore equals duration over parent duration.
    """
    duration = max(1, cmap.duration_ms)
    by_id = cmap.concept_by_id()
    prop_color = {p.id: p.color_index for p in cmap.propositions}

    importances = [c.importance for c in cmap.concepts]
    rel_counts = {c.id: 0 for c in cmap.concepts}
    for r in cmap.relations:
        if r.src_id in rel_counts:
            rel_counts[r.src_id] += 1
        if r.dst_id in rel_counts:
            rel_counts[r.dst_id] += 1
    count_values = [float(v) for v in rel_counts.values()]

    def angle(ms: int) -> float:
        return FULL_CIRCLE * ms / duration

    rings: list[list[dict]] = []
    ring0 = [
        {
            "kind": "proposition",
            "id": p.id,
            "parent_id": None,
            "label": p.title,
            "start_ms": p.start_ms,
            "end_ms": p.end_ms,
            "start_angle": angle(p.start_ms),
            "angle": angle(p.end_ms - p.start_ms),
            "color_index": p.color_index,
            "importance_class": None,
            "radius_class": None,
        }
        for p in sorted(cmap.propositions, key=lambda p: p.start_ms)
    ]
    rings.append(ring0)

    depths = {c.id: _depth_of(c, by_id) for c in cmap.concepts}
    max_depth = max(depths.values(), default=0)
    for depth in range(1, max_depth + 1):
        ring_concepts = sorted(
            (c for c in cmap.concepts if depths[c.id] == depth),
            key=lambda c: (c.first_start_ms, c.label),
        )
        arcs: list[dict] = []
        cursor = 0
        for c in ring_concepts:
            lo, hi = c.spans[0][0], c.spans[-1][1]
            lo = max(lo, cursor)  # overlaps truncate so the ring tiles
            if hi <= lo:
                continue
            if lo > cursor:
                arcs.append(_gap(cursor, lo, angle))
            arcs.append(
                {
                    "kind": "concept",
                    "id": c.id,
                    "parent_id": c.parent_id or c.proposition_id,
                    "label": c.label,
                    "start_ms": lo,
                    "end_ms": hi,
                    "start_angle": angle(lo),
                    "angle": angle(hi - lo),
                    "color_index": prop_color.get(c.proposition_id, 0),
                    "importance_class": quantile_class(
                        c.importance, importances, N_IMPORTANCE_CLASSES
                    ),
                    "radius_class": quantile_class(
                        float(rel_counts[c.id]), count_values, N_RADIUS_CLASSES
                    ),
                }
            )
            cursor = hi
        if cursor < duration:
            arcs.append(_gap(cursor, duration, angle))
        rings.append(arcs)

    bars = [
        {
            "concept_id": c.id,
            "label": c.label,
            "depth": depths[c.id],
            "start_ms": c.first_start_ms,
            "end_ms": c.spans[-1][1],
            "color_index": prop_color.get(c.proposition_id, 0),
            "kind": c.kind.value,
        }
        for c in sorted(
            cmap.concepts, key=lambda c: (c.first_start_ms, depths[c.id], c.label)
        )
    ]

    river = [
        {
            "style": s["style"],
            "start_ms": int(s["start_ms"]),
            "end_ms": int(s["end_ms"]),
        }
        for s in (style_spans or [])
    ]

    return {
        "video_id": cmap.video_id,
        "duration_ms": cmap.duration_ms,
        "sunburst": {"rings": rings},
        "bars": bars,
        "river": river,
        "sparklines": sparklines or {},
    }


def _gap(lo: int, hi: int, angle) -> dict:
    return {
        "kind": "gap",
        "id": None,
        "parent_id": None,
        "label": "",
        "start_ms": lo,
        "end_ms": hi,
        "start_angle": angle(lo),
        "angle": angle(hi - lo),
        "color_index": None,
        "importance_class": None,
        "radius_class": None,
    }
