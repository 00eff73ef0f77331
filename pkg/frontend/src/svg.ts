/** Deterministic SVG line charts: fixed styles, no timestamps, stable numbers. */

import type { SeriesMap } from "./aggregate.js";

export interface PanelSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  xScale: "linear" | "log";
  series: SeriesMap;
}

const WIDTH = 560;
const HEIGHT = 400;
const MARGIN = { left: 70, right: 20, top: 40, bottom: 50 };
const COLORS = ["#0072bd", "#d95319", "#edb120", "#7e2f8e", "#77ac30", "#4dbeee", "#a2142f"];

function fmt(v: number): string {
  if (!Number.isFinite(v)) return "0";
  return Number(v.toPrecision(6)).toString();
}

function ticks(lo: number, hi: number, count = 5): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const candidates = [step, 2 * step, 5 * step, 10 * step];
  const chosen = candidates.find((s) => span / s <= count + 1) ?? 10 * step;
  const start = Math.ceil(lo / chosen) * chosen;
  const out: number[] = [];
  for (let t = start; t <= hi + 1e-12 * span; t += chosen) out.push(t);
  return out;
}

function panelSvg(spec: PanelSpec, xOffset: number): string {
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const allPoints = [...spec.series.values()].flat();
  const parts: string[] = [];
  const x0 = xOffset + MARGIN.left;
  const y0 = MARGIN.top;
  parts.push(
    `<rect x="${x0}" y="${y0}" width="${plotW}" height="${plotH}" fill="none" stroke="#333" stroke-width="1"/>`,
  );
  parts.push(
    `<text x="${x0 + plotW / 2}" y="${y0 - 14}" text-anchor="middle" font-size="14" font-family="sans-serif">${spec.title}</text>`,
  );
  parts.push(
    `<text x="${x0 + plotW / 2}" y="${y0 + plotH + 38}" text-anchor="middle" font-size="12" font-family="sans-serif">${spec.xLabel}</text>`,
  );
  parts.push(
    `<text x="${x0 - 52}" y="${y0 + plotH / 2}" text-anchor="middle" font-size="12" font-family="sans-serif" transform="rotate(-90 ${x0 - 52} ${y0 + plotH / 2})">${spec.yLabel}</text>`,
  );
  if (allPoints.length === 0) {
    parts.push(
      `<text x="${x0 + plotW / 2}" y="${y0 + plotH / 2}" text-anchor="middle" font-size="12" fill="#888" font-family="sans-serif">no trial data</text>`,
    );
    return parts.join("\n");
  }

  const xVals = allPoints.map((p) => p.x);
  const toX =
    spec.xScale === "log"
      ? (v: number) => Math.log10(Math.max(v, 1e-300) + 1)
      : (v: number) => v;
  let xLo = Math.min(...xVals.map(toX));
  let xHi = Math.max(...xVals.map(toX));
  if (xHi === xLo) {
    xLo -= 0.5;
    xHi += 0.5;
  }
  const yAll = allPoints.flatMap((p) => [p.mean - p.stderr, p.mean + p.stderr]);
  let yLo = Math.min(...yAll);
  let yHi = Math.max(...yAll);
  if (yHi === yLo) {
    yLo -= 0.5;
    yHi += 0.5;
  }
  const pad = (yHi - yLo) * 0.06;
  yLo -= pad;
  yHi += pad;
  const sx = (v: number) => x0 + ((toX(v) - xLo) / (xHi - xLo)) * plotW;
  const sy = (v: number) => y0 + plotH - ((v - yLo) / (yHi - yLo)) * plotH;

  for (const t of ticks(yLo, yHi)) {
    parts.push(
      `<line x1="${x0}" y1="${fmt(sy(t))}" x2="${x0 + plotW}" y2="${fmt(sy(t))}" stroke="#ddd" stroke-width="0.5"/>`,
      `<text x="${x0 - 6}" y="${fmt(sy(t) + 4)}" text-anchor="end" font-size="10" font-family="sans-serif">${fmt(t)}</text>`,
    );
  }
  const xTickVals = [...new Set(xVals)].sort((a, b) => a - b);
  const shown = xTickVals.length <= 8 ? xTickVals : ticks(Math.min(...xVals), Math.max(...xVals));
  for (const t of shown) {
    parts.push(
      `<text x="${fmt(sx(t))}" y="${y0 + plotH + 16}" text-anchor="middle" font-size="10" font-family="sans-serif">${fmt(t)}</text>`,
    );
  }

  let idx = 0;
  for (const [name, points] of spec.series) {
    const color = COLORS[idx % COLORS.length];
    const path = points
      .map((p, i) => `${i === 0 ? "M" : "L"}${fmt(sx(p.x))},${fmt(sy(p.mean))}`)
      .join(" ");
    parts.push(`<path d="${path}" fill="none" stroke="${color}" stroke-width="1.8"/>`);
    for (const p of points) {
      if (p.stderr > 0) {
        parts.push(
          `<line x1="${fmt(sx(p.x))}" y1="${fmt(sy(p.mean - p.stderr))}" x2="${fmt(sx(p.x))}" y2="${fmt(sy(p.mean + p.stderr))}" stroke="${color}" stroke-width="1"/>`,
        );
      }
      parts.push(
        `<circle cx="${fmt(sx(p.x))}" cy="${fmt(sy(p.mean))}" r="2.5" fill="${color}"/>`,
      );
    }
    parts.push(
      `<rect x="${x0 + 8}" y="${y0 + 8 + idx * 16}" width="14" height="3" fill="${color}"/>`,
      `<text x="${x0 + 26}" y="${y0 + 13 + idx * 16}" font-size="10" font-family="sans-serif">${name}</text>`,
    );
    idx += 1;
  }
  return parts.join("\n");
}

export function renderSvg(panels: PanelSpec[]): string {
  const width = WIDTH * panels.length;
  const body = panels.map((p, i) => panelSvg(p, i * WIDTH)).join("\n");
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${HEIGHT}" viewBox="0 0 ${width} ${HEIGHT}">`,
    `<rect width="${width}" height="${HEIGHT}" fill="white"/>`,
    body,
    `</svg>`,
    ``,
  ].join("\n");
}
