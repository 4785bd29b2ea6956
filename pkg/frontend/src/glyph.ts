/** Radial glyph view models for concepts and propositions.
 *
 * Every number here is arithmetic over server payloads: ring fractions
 * from style durations and sub-concept distributions, radius from span
 * duration, the association hat from relations. No analysis happens in
 * the client.
 */

import type { ConceptMap, Concept, NavigationPayload } from './types';

export interface RingSegment {
  key: string;
  fraction: number;
}

export interface HatEntry {
  proposition_id: string;
  color_index: number;
  enlarged: boolean;
  highlighted_concepts: string[];
}

export interface GlyphViewModel {
  concept_id: string;
  label: string;
  kind: Concept['kind'];
  radius: number;
  importance: number;
  sparkline: number[];
  style_ring: RingSegment[];
  sub_ring: RingSegment[];
  hat: HatEntry[] | null;
  position_fraction: number;
  marker: 'E' | 'T' | null;
}

export const MIN_GLYPH_RADIUS = 8;
export const MAX_GLYPH_RADIUS = 26;
export const HAT_ENLARGED_LIMIT = 3;

function spanTotal(concept: Concept): number {
  return concept.spans.reduce((acc, [s, e]) => acc + (e - s), 0);
}

function fractions(entries: [string, number][]): RingSegment[] {
  const total = entries.reduce((acc, [, v]) => acc + v, 0);
  if (total <= 0) return [];
  return entries.map(([key, v]) => ({ key, fraction: v / total }));
}

export function glyphRadius(concept: Concept, durationMs: number): number {
  if (durationMs <= 0) return MIN_GLYPH_RADIUS;
  const share = Math.min(1, spanTotal(concept) / durationMs);
  return MIN_GLYPH_RADIUS + (MAX_GLYPH_RADIUS - MIN_GLYPH_RADIUS) * Math.sqrt(share);
}

export function buildGlyph(
  map: ConceptMap,
  navigation: NavigationPayload,
  conceptId: string,
): GlyphViewModel {
  const concept = map.concepts.find((c) => c.id === conceptId);
  if (!concept) throw new Error(`unknown concept ${conceptId}`);

  const styleRing = fractions(
    Object.entries(concept.style_durations).sort(([a], [b]) => (a < b ? -1 : 1)),
  );
  const subRing = fractions(
    concept.sub_distribution.map(([childId, dur]) => [childId, dur] as [string, number]),
  );

  const associated = map.relations.filter(
    (r) =>
      r.type === 'association' && (r.src_id === concept.id || r.dst_id === concept.id),
  );
  let hat: HatEntry[] | null = null;
  if (associated.length > 0) {
    const byId = new Map(map.concepts.map((c) => [c.id, c]));
    const highlighted = new Map<string, Set<string>>();
    for (const rel of associated) {
      const otherId = rel.src_id === concept.id ? rel.dst_id : rel.src_id;
      const other = byId.get(otherId);
      if (!other) continue;
      const set = highlighted.get(other.proposition_id) ?? new Set<string>();
      set.add(otherId);
      highlighted.set(other.proposition_id, set);
    }
    // Propositions with associated concepts show enlarged (top entries
    // by highlight count); the rest shrink to the smallest visible size.
    const ranked = [...highlighted.entries()].sort(
      (a, b) => b[1].size - a[1].size || (a[0] < b[0] ? -1 : 1),
    );
    const enlargedIds = new Set(ranked.slice(0, HAT_ENLARGED_LIMIT).map(([pid]) => pid));
    hat = map.propositions.map((p) => ({
      proposition_id: p.id,
      color_index: p.color_index,
      enlarged: enlargedIds.has(p.id),
      highlighted_concepts: [...(highlighted.get(p.id) ?? [])].sort(),
    }));
  }

  const sparkline = navigation.sparklines[concept.id]?.values ?? [];
  const firstStart = concept.spans.length > 0 ? concept.spans[0][0] : 0;
  return {
    concept_id: concept.id,
    label: concept.label,
    kind: concept.kind,
    radius: glyphRadius(concept, map.duration_ms),
    importance: concept.importance,
    sparkline,
    style_ring: styleRing,
    sub_ring: subRing,
    hat,
    position_fraction: map.duration_ms > 0 ? firstStart / map.duration_ms : 0,
    marker: concept.kind === 'example' ? 'E' : concept.kind === 'test' ? 'T' : null,
  };
}
