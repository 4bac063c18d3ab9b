#!/usr/bin/env node
import { readFileSync, readdirSync, writeFileSync, mkdirSync, statSync } from "node:fs";
import { basename, join } from "node:path";
import { pathToFileURL } from "node:url";
import { parseTable } from "./schema.js";
import { buildFigure } from "./figure.js";
import { renderFigure } from "./svg.js";

const USAGE = "usage: render_figs <csv_dir> <out_dir>";

export function renderCsvFile(csvPath: string, outDir: string): string {
  const text = readFileSync(csvPath, "utf-8");
  const stem = basename(csvPath).replace(/\.csv$/i, "");
  const table = parseTable(text, stem);
  const svg = renderFigure(buildFigure(table));
  const outPath = join(outDir, `${stem}.svg`);
  writeFileSync(outPath, svg, "utf-8");
  return outPath;
}

export function main(argv: string[]): number {
  if (argv.length !== 2) {
    console.error(USAGE);
    return 2;
  }
  const [csvDir, outDir] = argv;
  let entries: string[];
  try {
    if (!statSync(csvDir).isDirectory()) {
      console.error(`${csvDir}: not a directory`);
      return 2;
    }
    entries = readdirSync(csvDir)
      .filter((f) => f.toLowerCase().endsWith(".csv"))
      .sort();
  } catch (err) {
    console.error(`${csvDir}: ${(err as Error).message}`);
    return 2;
  }
  if (entries.length === 0) {
    console.error(`${csvDir}: no .csv files`);
    return 2;
  }
  mkdirSync(outDir, { recursive: true });
  let failures = 0;
  for (const entry of entries) {
    try {
      const outPath = renderCsvFile(join(csvDir, entry), outDir);
      console.log(`${entry} -> ${outPath}`);
    } catch (err) {
      const e = err as Error;
      console.error(`${entry}: ${e.name}: ${e.message}`);
      failures += 1;
    }
  }
  return failures > 0 ? 1 : 0;
}

if (import.meta.url === pathToFileURL(process.argv[1] ?? "").href) {
  process.exit(main(process.argv.slice(2)));
}
