/** Sparkline helpers: polyline points and the near-peak indicator. */

import type { SparklineBins } from './types';

export function sparklinePoints(
  values: number[],
  width: number,
  height: number,
): [number, number][] {
  if (values.length === 0) return [];
  const max = Math.max(...values, 1);
  const step = values.length > 1 ? width / (values.length - 1) : 0;
  return values.map((v, i) => [i * step, height - (v / max) * height]);
}

export function localMaxBins(values: number[]): number[] {
  const peaks: number[] = [];
  for (let i = 0; i < values.length; i++) {
    if (values[i] <= 0) continue;
    const left = i === 0 ? -Infinity : values[i - 1];
    const right = i === values.length - 1 ? -Infinity : values[i + 1];
    if (values[i] >= left && values[i] >= right) peaks.push(i);
  }
  return peaks;
}

/** The red dot: active when the playhead sits within one bin of a local
 * maximum bin. */
export function peakIndicator(bins: SparklineBins, playheadMs: number): boolean {
  if (bins.values.length === 0 || bins.bin_ms <= 0) return false;
  const current = Math.floor(playheadMs / bins.bin_ms);
  return localMaxBins(bins.values).some((peak) => Math.abs(peak - current) <= 1);
}
