/** render-all: read the five experiment CSVs and write one SVG figure each. */

import { existsSync, mkdirSync, writeFileSync } from "fs";
import { join } from "path";

import { readCsv } from "./csv.js";
import { FIGURES, renderFigure } from "./figures.js";

function parseArgs(argv: string[]): { inDir: string; outDir: string } {
  if (argv[0] !== "render-all") {
    throw new Error("usage: render-all --in <dir> --out <dir>");
  }
  let inDir = ".";
  let outDir = ".";
  for (let i = 1; i < argv.length; i += 2) {
    if (argv[i] === "--in") inDir = argv[i + 1];
    else if (argv[i] === "--out") outDir = argv[i + 1];
    else throw new Error(`unknown flag ${argv[i]}`);
  }
  return { inDir, outDir };
}

export function main(argv: string[]): number {
  let args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error((err as Error).message);
    return 1;
  }
  mkdirSync(args.outDir, { recursive: true });
  let rendered = 0;
  for (const spec of FIGURES) {
    const csvPath = join(args.inDir, `${spec.experiment}.csv`);
    if (!existsSync(csvPath)) {
      console.warn(`skipping ${spec.experiment}: ${csvPath} not found`);
      continue;
    }
    let rows;
    try {
      rows = readCsv(csvPath);
    } catch (err) {
      console.error(`${spec.experiment}: ${(err as Error).message}`);
      return 1;
    }
    if (rows.length === 0) {
      console.warn(`${spec.experiment}: no data rows, rendering empty axes`);
    }
    const svg = renderFigure(rows, spec);
    writeFileSync(join(args.outDir, spec.output), svg, "utf-8");
    rendered += 1;
  }
  console.log(`rendered ${rendered} figure(s) into ${args.outDir}`);
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exitCode = main(process.argv.slice(2));
}
