/** Reader for the harness result schema (fields never contain commas). */

import { readFileSync } from "fs";

export const REQUIRED_COLUMNS = [
  "experiment",
  "seed",
  "param",
  "param_value",
  "metric",
  "value",
  "trial",
] as const;

export interface ResultRow {
  experiment: string;
  seed: string;
  param: string;
  param_value: number;
  metric: string;
  value: number;
  trial: string;
}

export function parseCsv(text: string): ResultRow[] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new Error("empty file: missing header row");
  }
  const header = lines[0].split(",");
  const missing = REQUIRED_COLUMNS.filter((c) => !header.includes(c));
  if (missing.length > 0) {
    throw new Error(`missing columns: ${missing.join(", ")}`);
  }
  const index = new Map(header.map((h, i) => [h, i]));
  const rows: ResultRow[] = [];
  for (const line of lines.slice(1)) {
    const parts = line.split(",");
    rows.push({
      experiment: parts[index.get("experiment")!],
      seed: parts[index.get("seed")!],
      param: parts[index.get("param")!],
      param_value: Number(parts[index.get("param_value")!]),
      metric: parts[index.get("metric")!],
      value: Number(parts[index.get("value")!]),
      trial: parts[index.get("trial")!],
    });
  }
  return rows;
}

export function readCsv(path: string): ResultRow[] {
  return parseCsv(readFileSync(path, "utf-8"));
}
