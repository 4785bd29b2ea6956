/** Selection state: one concept drives every coordinated view.
 *
 * Selecting a concept highlights its relations, scrolls the thread,
 * lights up the navigation bar, seeks the video to the earliest span
 * and fills the support panel; a playing video drives the inverse
 * mapping from time to concept.
 */

import type { ConceptMap } from './types';

export interface SelectionState {
  selected_id: string | null;
  highlighted_relations: number[];
  highlighted_concepts: string[];
  seek_ms: number | null;
  scroll_to_x_fraction: number | null;
  support_panel: { label: string; spans: [number, number][] } | null;
}

export const EMPTY_SELECTION: SelectionState = {
  selected_id: null,
  highlighted_relations: [],
  highlighted_concepts: [],
  seek_ms: null,
  scroll_to_x_fraction: null,
  support_panel: null,
};

export function selectConcept(map: ConceptMap, conceptId: string): SelectionState {
  const concept = map.concepts.find((c) => c.id === conceptId);
  if (!concept) return EMPTY_SELECTION;

  const relationIdx: number[] = [];
  const related = new Set<string>();
  map.relations.forEach((rel, i) => {
    if (rel.src_id === conceptId || rel.dst_id === conceptId) {
      relationIdx.push(i);
      related.add(rel.src_id === conceptId ? rel.dst_id : rel.src_id);
    }
  });
  related.delete(conceptId);

  const earliest = concept.spans.length > 0 ? concept.spans[0][0] : 0;
  return {
    selected_id: conceptId,
    highlighted_relations: relationIdx,
    highlighted_concepts: [...related].sort(),
    seek_ms: earliest,
    scroll_to_x_fraction: map.duration_ms > 0 ? earliest / map.duration_ms : 0,
    support_panel: { label: concept.label, spans: concept.spans },
  };
}

/** Inverse mapping: the concept the playhead is inside right now.
 * Prefers the deepest covering concept; ties go to the latest start. */
export function conceptAtTime(map: ConceptMap, playheadMs: number): string | null {
  const byId = new Map(map.concepts.map((c) => [c.id, c]));
  const depth = (id: string): number => {
    let d = 1;
    let cur = byId.get(id)?.parent_id ?? null;
    while (cur) {
      d += 1;
      cur = byId.get(cur)?.parent_id ?? null;
    }
    return d;
  };
  let best: { id: string; depth: number; start: number } | null = null;
  for (const c of map.concepts) {
    for (const [s, e] of c.spans) {
      if (s <= playheadMs && playheadMs < e) {
        const d = depth(c.id);
        if (
          best === null ||
          d > best.depth ||
          (d === best.depth && s > best.start)
        ) {
          best = { id: c.id, depth: d, start: s };
        }
        break;
      }
    }
  }
  return best?.id ?? null;
}
