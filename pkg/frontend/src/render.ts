/** Deterministic SVG string renderers.
 *
 * Pure functions from payloads to markup: identical inputs produce
 * identical strings, which is what the layout-purity and edit
 * round-trip tests compare. The browser shell just injects the result.
 */

import type { ConceptMap, NavigationPayload } from './types';
import { computeSunburstLayout } from './sunburst';
import { computeThreadLayout } from './thread';
import { buildGlyph } from './glyph';
import { sparklinePoints } from './sparkline';

export const PROPOSITION_COLORS = [
  '#4e79a7', '#f28e2b', '#59a14f', '#e15759', '#b07aa1',
  '#76b7b2', '#edc948', '#ff9da7', '#9c755f', '#bab0ac',
];

export const IMPORTANCE_FILLS = [
  '#eff3ff', '#c6dbef', '#9ecae1', '#4292c6', '#084594',
];

function colorFor(index: number | null): string {
  if (index === null) return '#e8e8e8';
  return PROPOSITION_COLORS[index % PROPOSITION_COLORS.length];
}

function importanceFill(importance: number): string {
  const cls = Math.min(4, Math.floor(importance * 5));
  return IMPORTANCE_FILLS[cls];
}

export function renderSunburstSvg(payload: NavigationPayload, radius = 200): string {
  const layout = computeSunburstLayout(payload, radius);
  const size = radius * 2;
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${size} ${size}" ` +
      `class="sunburst" data-video="${payload.video_id}">`,
  ];
  for (const w of layout.wedges) {
    if (!w.path) continue;
    const fill =
      w.arc.kind === 'gap'
        ? '#f4f4f4'
        : w.arc.importance_class !== null
          ? IMPORTANCE_FILLS[w.arc.importance_class]
          : colorFor(w.arc.color_index);
    const id = w.arc.id ?? '';
    parts.push(
      `<path d="${w.path}" fill="${fill}" stroke="#fff" stroke-width="0.6"` +
        (id ? ` data-id="${id}"` : '') +
        `><title>${escapeXml(w.arc.label)}</title></path>`,
    );
  }
  parts.push('</svg>');
  return parts.join('');
}

export function renderThreadSvg(
  map: ConceptMap,
  navigation: NavigationPayload,
  width = 1200,
  collapsed: ReadonlySet<string> = new Set(),
): string {
  const layout = computeThreadLayout(map, width, collapsed);
  const height = layout.laneHeight + 80;
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" ` +
      `class="thread" data-video="${map.video_id}" data-revision="${map.revision ?? 0}">`,
  ];

  for (const region of layout.inclusions) {
    parts.push(
      `<rect x="${region.x0}" y="${region.y0}" width="${region.x1 - region.x0}" ` +
        `height="${region.y1 - region.y0}" rx="14" fill="${colorFor(region.color_index)}" ` +
        `opacity="0.14" data-inclusion="${region.parent_id}"/>`,
    );
  }
  for (const line of layout.sequence) {
    const [[x0, y0], [x1, y1]] = line.points;
    parts.push(
      `<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y1}" ` +
        `stroke="#888" stroke-width="2" data-seq="${line.from}:${line.to}"/>`,
    );
  }
  for (const curve of layout.curves) {
    const style =
      curve.kind === 'association'
        ? 'stroke="#c06" stroke-dasharray="6 4" fill="none"'
        : 'stroke="#069" fill="none"';
    parts.push(
      `<path d="${curve.path}" ${style} stroke-width="1.5" ` +
        `data-${curve.kind}="${curve.from}:${curve.to}"/>`,
    );
  }

  for (const node of layout.nodes) {
    const glyph = buildGlyph(map, navigation, node.concept_id);
    parts.push(renderGlyphSvg(glyph, node.x, node.y));
  }
  parts.push('</svg>');
  return parts.join('');
}

export interface GlyphGeometry {
  cx: number;
  cy: number;
}

export function renderGlyphSvg(
  glyph: ReturnType<typeof buildGlyph>,
  cx: number,
  cy: number,
): string {
  const r = glyph.radius;
  const parts: string[] = [
    `<g class="glyph" data-id="${glyph.concept_id}" transform="translate(${cx},${cy})">`,
  ];

  if (glyph.marker) {
    // Examples and tests are yellow triangles labeled E / T.
    parts.push(
      `<polygon points="0,${-r} ${r},${r} ${-r},${r}" fill="#f2c744" stroke="#a8860b"/>` +
        `<text y="${r - 3}" text-anchor="middle" font-size="${r}" fill="#5b4500">` +
        `${glyph.marker}</text>`,
    );
    parts.push('</g>');
    return parts.join('');
  }

  // Outer ring: course style durations. Outermost: sub-concepts.
  parts.push(ringSvg(glyph.style_ring, r + 3, r + 7, 'style'));
  parts.push(ringSvg(glyph.sub_ring, r + 8, r + 12, 'sub'));

  parts.push(
    `<circle r="${r.toFixed(2)}" fill="${importanceFill(glyph.importance)}" ` +
      `stroke="#456" stroke-width="1"/>`,
  );
  const pts = sparklinePoints(glyph.sparkline, r * 1.4, r * 0.8)
    .map(([x, y]) => `${(x - r * 0.7).toFixed(2)},${(y - r * 0.4).toFixed(2)}`)
    .join(' ');
  if (pts) {
    parts.push(`<polyline points="${pts}" fill="none" stroke="#345" stroke-width="1"/>`);
  }

  if (glyph.hat) {
    const slots = glyph.hat.length;
    const slotW = (2 * r) / Math.max(1, slots);
    glyph.hat.forEach((entry, i) => {
      const h = entry.enlarged ? 8 : 3;
      parts.push(
        `<rect x="${(-r + i * slotW).toFixed(2)}" y="${(-r - 12).toFixed(2)}" ` +
          `width="${(slotW - 1).toFixed(2)}" height="${h}" ` +
          `fill="${colorFor(entry.color_index)}" data-hat="${entry.proposition_id}"/>`,
      );
    });
    const dotX = -r + 2 * r * glyph.position_fraction;
    parts.push(
      `<circle cx="${dotX.toFixed(2)}" cy="${(-r - 14).toFixed(2)}" r="2" fill="#222"/>`,
    );
  }
  parts.push('</g>');
  return parts.join('');
}

function ringSvg(
  segments: { key: string; fraction: number }[],
  r0: number,
  r1: number,
  kind: string,
): string {
  if (segments.length === 0) return '';
  const parts: string[] = [];
  let angle = 0;
  for (const seg of segments) {
    const sweep = seg.fraction * 360;
    parts.push(
      `<path d="${ringArcPath(r0, r1, angle, Math.min(angle + sweep, 359.999))}" ` +
        `fill="#9ab" opacity="0.8" data-${kind}="${escapeXml(seg.key)}"/>`,
    );
    angle += sweep;
  }
  return parts.join('');
}

function ringArcPath(r0: number, r1: number, a0: number, a1: number): string {
  const rad = (a: number) => ((a - 90) * Math.PI) / 180;
  const p = (r: number, a: number) =>
    `${(r * Math.cos(rad(a))).toFixed(2)} ${(r * Math.sin(rad(a))).toFixed(2)}`;
  const large = a1 - a0 > 180 ? 1 : 0;
  return (
    `M ${p(r1, a0)} A ${r1} ${r1} 0 ${large} 1 ${p(r1, a1)} ` +
    `L ${p(r0, a1)} A ${r0} ${r0} 0 ${large} 0 ${p(r0, a0)} Z`
  );
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}
