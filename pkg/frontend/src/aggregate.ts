/** Trial-row aggregation: mean and standard error per (series, x) cell. */

import type { ResultRow } from "./csv.js";

export interface SeriesPoint {
  x: number;
  mean: number;
  stderr: number;
  n: number;
}

export type SeriesMap = Map<string, SeriesPoint[]>;

export function mean(values: number[]): number {
  return values.reduce((a, b) => a + b, 0) / values.length;
}

export function stderr(values: number[]): number {
  if (values.length < 2) return 0;
  const m = mean(values);
  const ss = values.reduce((a, b) => a + (b - m) * (b - m), 0);
  return Math.sqrt(ss / (values.length - 1)) / Math.sqrt(values.length);
}

/** Group trial rows (aggregate rows excluded) into per-metric series. */
export function aggregate(rows: ResultRow[], metricPrefix = ""): SeriesMap {
  const cells = new Map<string, Map<number, number[]>>();
  for (const row of rows) {
    if (row.trial === "aggregate") continue;
    if (!row.metric.startsWith(metricPrefix)) continue;
    let byX = cells.get(row.metric);
    if (!byX) {
      byX = new Map();
      cells.set(row.metric, byX);
    }
    let vals = byX.get(row.param_value);
    if (!vals) {
      vals = [];
      byX.set(row.param_value, vals);
    }
    vals.push(row.value);
  }
  const out: SeriesMap = new Map();
  for (const metric of [...cells.keys()].sort()) {
    const byX = cells.get(metric)!;
    const points = [...byX.entries()]
      .map(([x, vals]) => ({ x, mean: mean(vals), stderr: stderr(vals), n: vals.length }))
      .sort((a, b) => a.x - b.x);
    out.set(metric, points);
  }
  return out;
}
