/** Sunburst geometry from the server's navigation payload.
 *
 * The server already decided every angle; this module only turns arcs
 * into drawable wedges. Rings grow outward from the proposition ring,
 * with ring height capped so deep hierarchies stay readable.
 */

import type { NavigationPayload, SunburstArc } from './types';

export interface SunburstWedge {
  arc: SunburstArc;
  ring: number;
  innerRadius: number;
  outerRadius: number;
  /** Degrees, clockwise from 12 o'clock. */
  startAngle: number;
  endAngle: number;
  path: string;
}

export interface SunburstLayout {
  wedges: SunburstWedge[];
  radius: number;
}

export const MAX_RING_HEIGHT = 34;
const INNER_HOLE = 0.28;

function polar(cx: number, cy: number, r: number, angleDeg: number): [number, number] {
  // 0 degrees points up; angles grow clockwise (chronological order).
  const rad = ((angleDeg - 90) * Math.PI) / 180;
  return [cx + r * Math.cos(rad), cy + r * Math.sin(rad)];
}

export function wedgePath(
  cx: number,
  cy: number,
  r0: number,
  r1: number,
  a0: number,
  a1: number,
): string {
  const large = a1 - a0 > 180 ? 1 : 0;
  const [x0, y0] = polar(cx, cy, r1, a0);
  const [x1, y1] = polar(cx, cy, r1, a1);
  const [x2, y2] = polar(cx, cy, r0, a1);
  const [x3, y3] = polar(cx, cy, r0, a0);
  return (
    `M ${x0.toFixed(3)} ${y0.toFixed(3)} ` +
    `A ${r1.toFixed(3)} ${r1.toFixed(3)} 0 ${large} 1 ${x1.toFixed(3)} ${y1.toFixed(3)} ` +
    `L ${x2.toFixed(3)} ${y2.toFixed(3)} ` +
    `A ${r0.toFixed(3)} ${r0.toFixed(3)} 0 ${large} 0 ${x3.toFixed(3)} ${y3.toFixed(3)} Z`
  );
}

export function computeSunburstLayout(
  payload: NavigationPayload,
  radius = 200,
): SunburstLayout {
  const rings = payload.sunburst.rings;
  const hole = radius * INNER_HOLE;
  const available = radius - hole;
  const ringHeight = Math.min(
    MAX_RING_HEIGHT,
    rings.length > 0 ? available / rings.length : available,
  );

  const wedges: SunburstWedge[] = [];
  rings.forEach((ring, ringIndex) => {
    const r0 = hole + ringIndex * ringHeight;
    for (const arc of ring) {
      // Relationship count nudges the outer radius within the ring band.
      const radiusBoost =
        arc.radius_class === null ? 1.0 : 0.6 + 0.1 * arc.radius_class;
      const r1 = r0 + ringHeight * (arc.kind === 'gap' ? 0.15 : radiusBoost);
      const a0 = arc.start_angle;
      const a1 = arc.start_angle + arc.angle;
      wedges.push({
        arc,
        ring: ringIndex,
        innerRadius: r0,
        outerRadius: r1,
        startAngle: a0,
        endAngle: a1,
        path: arc.angle <= 0 ? '' : wedgePath(radius, radius, r0, r1, a0, a1),
      });
    }
  });
  return { wedges, radius };
}
