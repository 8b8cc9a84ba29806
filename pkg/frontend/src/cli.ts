#!/usr/bin/env node
/**
 * plots <kind> --csv <path> [--csv <path> ...] [--meta <path> ...] --out <dir>
 *
 * Reads harness result CSVs (with their metadata sidecars) and writes one
 * multi-panel SVG per figure kind plus a points sidecar holding the exact
 * plotted values. Kinds: coverage | variance | timing.
 */

import { mkdirSync } from "fs";

import { renderFigure } from "./render";
import { SchemaError } from "./schema";

interface CliArgs {
  kind: "coverage" | "variance" | "timing";
  csv: string[];
  meta: string[];
  out: string;
}

function parseArgs(argv: string[]): CliArgs {
  const [kind, ...rest] = argv;
  if (!kind || !["coverage", "variance", "timing"].includes(kind)) {
    throw new SchemaError(
      `usage: plots <coverage|variance|timing> --csv <path> [--meta <path>] --out <dir>`,
    );
  }
  const csv: string[] = [];
  const meta: string[] = [];
  let out: string | null = null;
  for (let i = 0; i < rest.length; i += 2) {
    const flag = rest[i];
    const value = rest[i + 1];
    if (value === undefined) {
      throw new SchemaError(`missing value for ${flag}`);
    }
    if (flag === "--csv") csv.push(value);
    else if (flag === "--meta") meta.push(value);
    else if (flag === "--out") out = value;
    else throw new SchemaError(`unknown flag ${flag}`);
  }
  if (csv.length === 0) throw new SchemaError("at least one --csv is required");
  if (!out) throw new SchemaError("--out is required");
  return { kind: kind as CliArgs["kind"], csv, meta, out };
}

export function main(argv: string[]): number {
  let args: CliArgs;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 1;
  }
  try {
    mkdirSync(args.out, { recursive: true });
    const result = renderFigure(args.kind, args.csv, args.meta, args.out);
    console.error(
      `wrote ${result.svgPath} and ${result.pointsPath} ` +
        `(${result.data.panels.length} panel(s))`,
    );
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    console.error(`I/O error: ${String(err instanceof Error ? err.message : err)}`);
    return 2;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
