/** Thread-metaphor layout: concepts on a shared time axis.
 *
 * Concepts flatten chronologically and connect linearly; depth picks
 * the vertical lane. Inclusion shows as a background region containing
 * all descendants, association as dashed curves, similarity as solid
 * orthogonal polylines. Collapsing a concept re-homes its children's
 * distribution onto the collapsed glyph's outermost ring (the glyph
 * module already renders sub_distribution), so layout only has to drop
 * hidden nodes.
 */

import type { ConceptMap, Concept } from './types';

export interface ThreadNode {
  concept_id: string;
  x: number;
  y: number;
  lane: number;
  color_index: number;
  collapsed: boolean;
}

export interface ThreadLine {
  kind: 'sequence';
  from: string;
  to: string;
  points: [number, number][];
}

export interface InclusionRegion {
  parent_id: string;
  x0: number;
  y0: number;
  x1: number;
  y1: number;
  color_index: number;
}

export interface CurvePath {
  kind: 'association' | 'similarity';
  from: string;
  to: string;
  /** SVG path; dashed rendering is a style concern. */
  path: string;
}

export interface ThreadLayout {
  width: number;
  laneHeight: number;
  nodes: ThreadNode[];
  sequence: ThreadLine[];
  inclusions: InclusionRegion[];
  curves: CurvePath[];
}

export const LANE_HEIGHT = 90;
export const TOP_MARGIN = 60;

function depthOf(concept: Concept, byId: Map<string, Concept>): number {
  let depth = 1;
  let cur = concept.parent_id;
  while (cur) {
    depth += 1;
    cur = byId.get(cur)?.parent_id ?? null;
  }
  return depth;
}

export function timeToX(ms: number, durationMs: number, width: number): number {
  if (durationMs <= 0) return 0;
  return (ms / durationMs) * width;
}

export function computeThreadLayout(
  map: ConceptMap,
  width = 1200,
  collapsed: ReadonlySet<string> = new Set(),
): ThreadLayout {
  const byId = new Map(map.concepts.map((c) => [c.id, c]));
  const colorOf = new Map(map.propositions.map((p) => [p.id, p.color_index]));

  const hidden = new Set<string>();
  for (const c of map.concepts) {
    let cur = c.parent_id;
    while (cur) {
      if (collapsed.has(cur)) {
        hidden.add(c.id);
        break;
      }
      cur = byId.get(cur)?.parent_id ?? null;
    }
  }

  const visible = map.concepts
    .filter((c) => !hidden.has(c.id))
    .sort((a, b) => a.spans[0][0] - b.spans[0][0] || (a.id < b.id ? -1 : 1));

  const nodes: ThreadNode[] = visible.map((c) => {
    const lane = depthOf(c, byId);
    return {
      concept_id: c.id,
      x: timeToX(c.spans[0][0], map.duration_ms, width),
      y: TOP_MARGIN + (lane - 1) * LANE_HEIGHT,
      lane,
      color_index: colorOf.get(c.proposition_id) ?? 0,
      collapsed: collapsed.has(c.id),
    };
  });
  const nodeById = new Map(nodes.map((n) => [n.concept_id, n]));

  const sequence: ThreadLine[] = [];
  for (const rel of map.relations) {
    if (rel.type !== 'sequence') continue;
    const a = nodeById.get(rel.src_id);
    const b = nodeById.get(rel.dst_id);
    if (!a || !b) continue;
    sequence.push({
      kind: 'sequence',
      from: rel.src_id,
      to: rel.dst_id,
      points: [
        [a.x, a.y],
        [b.x, b.y],
      ],
    });
  }

  const inclusions: InclusionRegion[] = [];
  for (const parent of visible) {
    const children = visible.filter((c) => c.parent_id === parent.id);
    if (children.length === 0) continue;
    const members = [parent, ...descendants(parent, visible)];
    const xs = members.map((m) => nodeById.get(m.id)!.x);
    const ys = members.map((m) => nodeById.get(m.id)!.y);
    const pad = 30;
    inclusions.push({
      parent_id: parent.id,
      x0: Math.min(...xs) - pad,
      y0: Math.min(...ys) - pad,
      x1: Math.max(...xs) + pad,
      y1: Math.max(...ys) + pad,
      color_index: colorOf.get(parent.proposition_id) ?? 0,
    });
  }

  const curves: CurvePath[] = [];
  for (const rel of map.relations) {
    const a = nodeById.get(rel.src_id);
    const b = nodeById.get(rel.dst_id);
    if (!a || !b) continue;
    if (rel.type === 'association') {
      const midX = (a.x + b.x) / 2;
      const lift = Math.min(a.y, b.y) - 40;
      curves.push({
        kind: 'association',
        from: rel.src_id,
        to: rel.dst_id,
        path: `M ${a.x} ${a.y} Q ${midX} ${lift} ${b.x} ${b.y}`,
      });
    } else if (rel.type === 'similarity') {
      const drop = Math.max(a.y, b.y) + 40;
      curves.push({
        kind: 'similarity',
        from: rel.src_id,
        to: rel.dst_id,
        path:
          `M ${a.x} ${a.y} L ${a.x} ${drop} ` +
          `L ${b.x} ${drop} L ${b.x} ${b.y}`,
      });
    }
  }

  const maxLane = nodes.reduce((acc, n) => Math.max(acc, n.lane), 1);
  return {
    width,
    laneHeight: LANE_HEIGHT * maxLane + TOP_MARGIN,
    nodes,
    sequence,
    inclusions,
    curves,
  };
}

function descendants(parent: Concept, pool: Concept[]): Concept[] {
  const out: Concept[] = [];
  const stack = [parent.id];
  while (stack.length > 0) {
    const cur = stack.pop()!;
    for (const c of pool) {
      if (c.parent_id === cur) {
        out.push(c);
        stack.push(c.id);
      }
    }
  }
  return out;
}
