#!/usr/bin/env npx tsx
/**
 * Figure renderer for thermocap CLI outputs.
 *
 * Usage:
 *   tsx src/cli.ts ci-curve --out ci.svg curve1.csv [curve2.csv ...]
 *   tsx src/cli.ts delta-ci --out delta.svg scan.json
 *   tsx src/cli.ts capacity --out q.svg capacity.csv nc.json
 */

import { mkdirSync, readFileSync, writeFileSync } from "fs";
import path from "path";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { FigureKind, FigureSpec, render } from "./figures.js";
import { CsvTable, JsonDocument, parseCsv, parseJson } from "./schema.js";

function loadInput(file: string): CsvTable | JsonDocument {
  const text = readFileSync(file, "utf-8");
  return file.endsWith(".json") ? parseJson(text) : parseCsv(text);
}

export function main(argv: string[]): number {
  const args = yargs(argv)
    .command("$0 <kind> [inputs..]", "render a figure from CLI outputs", (y) =>
      y
        .positional("kind", {
          choices: ["ci-curve", "delta-ci", "capacity"] as const,
          demandOption: true,
        })
        .positional("inputs", { array: true, type: "string", demandOption: true }),
    )
    .option("out", { type: "string", demandOption: true, describe: "output SVG path" })
    .option("x-scale", { choices: ["log", "linear"] as const })
    .strict()
    .exitProcess(false)
    .parseSync();

  const spec: FigureSpec = {
    kind: args.kind as FigureKind,
    inputs: (args.inputs as string[]).map(loadInput),
    xScale: args.xScale as "log" | "linear" | undefined,
  };
  const svg = render(spec);
  mkdirSync(path.dirname(args.out), { recursive: true });
  writeFileSync(args.out, svg, "utf-8");
  return 0;
}

const isDirectRun =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${path.resolve(process.argv[1])}`).href;
if (isDirectRun) {
  try {
    process.exit(main(hideBin(process.argv)));
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : String(err)}`);
    process.exit(1);
  }
}
