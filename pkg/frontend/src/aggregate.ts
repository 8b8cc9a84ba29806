/**
 * Re-aggregation of raw result rows (group by method/scenario/n).
 *
 * Aggregates are recomputed from raw rows rather than trusted from any
 * pre-aggregated file, so the rendered points cross-check the harness's own
 * summaries. Coverage sums integer flags before a single division, matching
 * the harness computation bit for bit.
 */

import { ResultRow } from "./schema";

export interface CoveragePoint {
  scenario: string;
  method: string;
  n: number;
  rate: number;
  standardError: number;
  count: number;
}

export interface VariancePoint {
  scenario: string;
  method: string;
  n: number;
  mean: number;
  std: number;
  count: number;
}

export interface TimingSeries {
  method: string;
  scenario: string;
  steps: number[];
  elapsedUs: number[];
  regenSteps: number[];
}

function groupKey(row: ResultRow): string {
  return `${row.scenario}::${row.method}::${row.n}`;
}

function grouped(rows: ResultRow[]): Map<string, ResultRow[]> {
  const out = new Map<string, ResultRow[]>();
  for (const row of rows) {
    const key = groupKey(row);
    const bucket = out.get(key);
    if (bucket) {
      bucket.push(row);
    } else {
      out.set(key, [row]);
    }
  }
  return out;
}

function sortPoints<T extends { scenario: string; method: string; n: number }>(
  points: T[],
): T[] {
  return points.sort(
    (a, b) =>
      a.scenario.localeCompare(b.scenario) ||
      a.method.localeCompare(b.method) ||
      a.n - b.n,
  );
}

export function coveragePoints(rows: ResultRow[]): CoveragePoint[] {
  const points: CoveragePoint[] = [];
  for (const bucket of grouped(rows).values()) {
    const flags = bucket.filter((r) => Number.isFinite(r.covered));
    if (flags.length === 0) continue;
    let hits = 0;
    for (const r of flags) hits += r.covered === 1 ? 1 : 0;
    const rate = hits / flags.length;
    const se = Math.sqrt((rate * (1 - rate)) / flags.length);
    const { scenario, method, n } = flags[0];
    points.push({
      scenario,
      method,
      n,
      rate,
      standardError: se,
      count: flags.length,
    });
  }
  return sortPoints(points);
}

export function variancePoints(rows: ResultRow[]): VariancePoint[] {
  const points: VariancePoint[] = [];
  for (const bucket of grouped(rows).values()) {
    const vals = bucket
      .map((r) => r.varEst)
      .filter((v) => Number.isFinite(v));
    if (vals.length === 0) continue;
    let sum = 0;
    for (const v of vals) sum += v;
    const mean = sum / vals.length;
    let ss = 0;
    for (const v of vals) ss += (v - mean) * (v - mean);
    const std = vals.length > 1 ? Math.sqrt(ss / (vals.length - 1)) : 0;
    const { scenario, method, n } = bucket[0];
    points.push({ scenario, method, n, mean, std, count: vals.length });
  }
  return sortPoints(points);
}

/** Per-update timing trace; regen steps are where the regens counter jumps. */
export function timingSeries(rows: ResultRow[]): TimingSeries[] {
  const byMethod = new Map<string, ResultRow[]>();
  for (const row of rows) {
    const key = `${row.method}::${row.scenario}`;
    const bucket = byMethod.get(key);
    if (bucket) {
      bucket.push(row);
    } else {
      byMethod.set(key, [row]);
    }
  }
  const out: TimingSeries[] = [];
  for (const bucket of byMethod.values()) {
    bucket.sort((a, b) => a.n - b.n);
    const regenSteps: number[] = [];
    let last = 0;
    for (const row of bucket) {
      if (row.regens !== last) {
        regenSteps.push(row.n);
        last = row.regens;
      }
    }
    out.push({
      method: bucket[0].method,
      scenario: bucket[0].scenario,
      steps: bucket.map((r) => r.n),
      elapsedUs: bucket.map((r) => r.elapsedUs),
      regenSteps,
    });
  }
  return out.sort(
    (a, b) =>
      a.method.localeCompare(b.method) || a.scenario.localeCompare(b.scenario),
  );
}
