/** Per-experiment figure definitions over the harness CSV schema. */

import { aggregate } from "./aggregate.js";
import type { ResultRow } from "./csv.js";
import { renderSvg, type PanelSpec } from "./svg.js";

export interface FigureSpec {
  experiment: string;
  output: string;
  panels: Array<{
    title: string;
    xLabel: string;
    yLabel: string;
    xScale: "linear" | "log";
    metricPrefix: string;
  }>;
}

export const FIGURES: FigureSpec[] = [
  {
    experiment: "uplink-rician",
    output: "capacity_vs_rician.svg",
    panels: [
      {
        title: "Capacity vs Rician factor",
        xLabel: "Rician factor",
        yLabel: "capacity (bit/s/Hz)",
        xScale: "log",
        metricPrefix: "capacity:",
      },
    ],
  },
  {
    experiment: "uplink-error",
    output: "capacity_vs_error.svg",
    panels: [
      {
        title: "Capacity vs angle estimation error",
        xLabel: "error half-width (deg)",
        yLabel: "capacity (bit/s/Hz)",
        xScale: "linear",
        metricPrefix: "capacity:",
      },
    ],
  },
  {
    experiment: "uplink-distance-tau",
    output: "capacity_vs_distance_tau.svg",
    panels: [
      {
        title: "Capacity vs interferer distance per threshold",
        xLabel: "interferer distance (m)",
        yLabel: "capacity (bit/s/Hz)",
        xScale: "linear",
        metricPrefix: "capacity:",
      },
    ],
  },
  {
    experiment: "wet-beams",
    output: "energy_vs_beams.svg",
    panels: [
      {
        title: "Harvested energy vs beam count",
        xLabel: "beams per rotation",
        yLabel: "energy (J)",
        xScale: "linear",
        metricPrefix: "energy_",
      },
    ],
  },
  {
    experiment: "wet-sensing",
    output: "sensing_gain.svg",
    panels: [
      {
        title: "Worst harvested energy",
        xLabel: "max devices per beam",
        yLabel: "energy (J)",
        xScale: "linear",
        metricPrefix: "worst_energy_j:",
      },
      {
        title: "Average waiting cost",
        xLabel: "max devices per beam",
        yLabel: "waiting cost (s)",
        xScale: "linear",
        metricPrefix: "waiting_cost_s:",
      },
    ],
  },
];

export function renderFigure(rows: ResultRow[], spec: FigureSpec): string {
  const panels: PanelSpec[] = spec.panels.map((p) => ({
    title: p.title,
    xLabel: p.xLabel,
    yLabel: p.yLabel,
    xScale: p.xScale,
    series: aggregate(rows, p.metricPrefix),
  }));
  return renderSvg(panels);
}
