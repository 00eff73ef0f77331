import { mkdtempSync, readFileSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";

import { describe, expect, it } from "vitest";

import { main } from "../src/cli.js";
import { parseCsv } from "../src/csv.js";
import { FIGURES, renderFigure } from "../src/figures.js";

const HEADER = "experiment,seed,param,param_value,metric,value,trial";

function sensingCsv(): string {
  const lines = [HEADER];
  for (const n of [10, 30, 50]) {
    for (let t = 0; t < 3; t++) {
      lines.push(`wet-sensing,1,n_max,${n},worst_energy_j:sensing,${(1 + 0.1 * t) * n},${t}`);
      lines.push(`wet-sensing,1,n_max,${n},worst_energy_j:baseline,${(0.6 + 0.1 * t) * n},${t}`);
      lines.push(`wet-sensing,1,n_max,${n},waiting_cost_s:sensing,${100 - n + t},${t}`);
      lines.push(`wet-sensing,1,n_max,${n},waiting_cost_s:baseline,${140 - n + t},${t}`);
      lines.push(`wet-sensing,1,n_max,${n},waiting_cost_s:count_only,${120 - n + t},${t}`);
    }
  }
  return lines.join("\n") + "\n";
}

describe("figure rendering", () => {
  it("header-only csv yields an empty-axes figure", () => {
    const spec = FIGURES.find((f) => f.experiment === "wet-beams")!;
    const svg = renderFigure(parseCsv(HEADER + "\n"), spec);
    expect(svg).toContain("<svg");
    expect(svg).toContain("no trial data");
  });

  it("wet-sensing renders a two-panel figure", () => {
    const spec = FIGURES.find((f) => f.experiment === "wet-sensing")!;
    const svg = renderFigure(parseCsv(sensingCsv()), spec);
    expect(svg).toContain("Worst harvested energy");
    expect(svg).toContain("Average waiting cost");
    expect(svg).toContain('width="1120"'); // two side-by-side panels
    expect(svg).toContain("waiting_cost_s:count_only");
  });

  it("re-render is byte identical", () => {
    const spec = FIGURES.find((f) => f.experiment === "wet-sensing")!;
    const rows = parseCsv(sensingCsv());
    const a = renderFigure(rows, spec);
    const b = renderFigure(parseCsv(sensingCsv()), spec);
    expect(Buffer.from(a).equals(Buffer.from(b))).toBe(true);
  });
});

describe("render-all command", () => {
  it("renders available csvs and returns success", () => {
    const inDir = mkdtempSync(join(tmpdir(), "figs-in-"));
    const outDir = mkdtempSync(join(tmpdir(), "figs-out-"));
    writeFileSync(join(inDir, "wet-sensing.csv"), sensingCsv());
    writeFileSync(join(inDir, "wet-beams.csv"), HEADER + "\n");
    const code = main(["render-all", "--in", inDir, "--out", outDir]);
    expect(code).toBe(0);
    const sensing = readFileSync(join(outDir, "sensing_gain.svg"), "utf-8");
    expect(sensing).toContain("<svg");
    const beams = readFileSync(join(outDir, "energy_vs_beams.svg"), "utf-8");
    expect(beams).toContain("no trial data");
  });

  it("missing columns fail with a named error", () => {
    const inDir = mkdtempSync(join(tmpdir(), "figs-in-"));
    const outDir = mkdtempSync(join(tmpdir(), "figs-out-"));
    writeFileSync(join(inDir, "wet-sensing.csv"), "experiment,seed\n");
    const code = main(["render-all", "--in", inDir, "--out", outDir]);
    expect(code).toBe(1);
  });

  it("bad usage returns config error", () => {
    expect(main(["nope"])) .toBe(1);
  });
});
