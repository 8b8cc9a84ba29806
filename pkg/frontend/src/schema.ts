/**
 * Harness CSV schema: one row per (method, scenario, checkpoint, replication).
 *
 * Numeric cells may carry "nan" (failed replications, timing-only rows); those
 * parse to NaN and are skipped by the aggregators.
 */

import Papa from "papaparse";

export const REQUIRED_COLUMNS = [
  "method",
  "scenario",
  "n",
  "rep",
  "var_est",
  "covered",
  "ci_lo",
  "ci_hi",
  "elapsed_us",
  "regens",
  "subseed",
] as const;

export interface ResultRow {
  method: string;
  scenario: string;
  n: number;
  rep: number;
  varEst: number;
  covered: number;
  ciLo: number;
  ciHi: number;
  elapsedUs: number;
  regens: number;
  subseed: string;
}

export interface RunMetadata {
  schema_version?: number;
  columns?: string[];
  level?: number;
  config?: Record<string, unknown>;
  oracle?: {
    true_mean?: number;
    sigma_inf?: { value: number; source: string; standard_error?: number };
  };
  kind?: string;
  [key: string]: unknown;
}

export class SchemaError extends Error {}

export function parseResultsCsv(text: string): ResultRow[] {
  const parsed = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    throw new SchemaError(`CSV parse failure: ${parsed.errors[0].message}`);
  }
  const rows = parsed.data;
  if (rows.length === 0) {
    throw new SchemaError("CSV is empty");
  }
  const header = rows[0];
  const index = new Map<string, number>();
  header.forEach((name, i) => index.set(name, i));
  for (const required of REQUIRED_COLUMNS) {
    if (!index.has(required)) {
      throw new SchemaError(`missing column: ${required}`);
    }
  }
  const col = (row: string[], name: string): string => row[index.get(name)!];
  const num = (row: string[], name: string): number => parseFloat(col(row, name));
  return rows.slice(1).map((row) => ({
    method: col(row, "method"),
    scenario: col(row, "scenario"),
    n: parseInt(col(row, "n"), 10),
    rep: parseInt(col(row, "rep"), 10),
    varEst: num(row, "var_est"),
    covered: num(row, "covered"),
    ciLo: num(row, "ci_lo"),
    ciHi: num(row, "ci_hi"),
    elapsedUs: num(row, "elapsed_us"),
    regens: parseInt(col(row, "regens"), 10),
    subseed: col(row, "subseed"),
  }));
}

export function parseMetadata(text: string): RunMetadata {
  return JSON.parse(text) as RunMetadata;
}
