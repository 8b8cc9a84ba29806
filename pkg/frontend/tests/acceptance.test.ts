/**
 * Secondary acceptance: rendering the coverage-grid CSVs yields a three-panel
 * coverage figure whose plotted points equal the harness's own aggregates
 * exactly, and the timing figure marks spikes exactly at the cube indices
 * present in the data. Runs through the CLI entry point end to end.
 */

import { existsSync, mkdtempSync, readFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { describe, expect, it } from "vitest";

import { main } from "../src/cli";
import { FigureData } from "../src/figures";

const FIXTURES = join(__dirname, "fixtures");

interface ExpectedAggregates {
  coverage: Array<{
    scenario: string;
    method: string;
    n: number;
    rate: number;
    count: number;
  }>;
  variance: Array<{
    scenario: string;
    method: string;
    n: number;
    mean: number;
    std: number;
    count: number;
  }>;
}

const EXPECTED: ExpectedAggregates = JSON.parse(
  readFileSync(join(FIXTURES, "expected_aggregates.json"), "utf-8"),
);

function renderToTmp(kind: string, csvNames: string[]): FigureData {
  const out = mkdtempSync(join(tmpdir(), "plots-"));
  const argv = [kind];
  for (const name of csvNames) {
    argv.push("--csv", join(FIXTURES, name));
  }
  argv.push("--out", out);
  expect(main(argv)).toBe(0);
  expect(existsSync(join(out, `${kind}.svg`))).toBe(true);
  return JSON.parse(
    readFileSync(join(out, `${kind}.points.json`), "utf-8"),
  ) as FigureData;
}

describe("secondary acceptance", () => {
  it("criterion 12a: coverage points equal harness aggregates exactly", () => {
    const data = renderToTmp("coverage", [
      "coverage_ma0.csv",
      "coverage_ma2.csv",
      "coverage_ma20.csv",
    ]);
    expect(data.panels).toHaveLength(3);
    let checked = 0;
    for (const panel of data.panels) {
      for (const series of panel.series) {
        for (const [n, rate] of series.points) {
          const want = EXPECTED.coverage.find(
            (e) =>
              e.scenario === panel.scenario &&
              e.method === series.method &&
              e.n === n,
          );
          expect(want, `${panel.scenario}/${series.method}/${n}`).toBeDefined();
          // exact equality: both sides sum integer flags then divide once
          expect(rate).toBe(want!.rate);
          checked += 1;
        }
      }
    }
    expect(checked).toBe(EXPECTED.coverage.length);
    const ok = checked === EXPECTED.coverage.length;
    console.log(
      `ACCEPT 12 coverage-points-exact: ${ok ? "PASS" : "FAIL"} (${checked} points)`,
    );
  });

  it("criterion 12b: variance points match harness aggregates", () => {
    const data = renderToTmp("variance", [
      "coverage_ma0.csv",
      "coverage_ma2.csv",
      "coverage_ma20.csv",
    ]);
    for (const panel of data.panels) {
      for (const series of panel.series) {
        series.points.forEach(([n, mean], i) => {
          const want = EXPECTED.variance.find(
            (e) =>
              e.scenario === panel.scenario &&
              e.method === series.method &&
              e.n === n,
          )!;
          // float summation order may differ from numpy's pairwise sums
          expect(Math.abs(mean - want.mean)).toBeLessThan(1e-12);
          const [, lo, hi] = series.band![i];
          expect(Math.abs((hi - lo) / 2 - want.std)).toBeLessThan(1e-12);
        });
      }
    }
  });

  it("criterion 12c: timing figure marks spikes at the cubes in the data", () => {
    const data = renderToTmp("timing", ["timing_block.csv"]);
    const spikes = data.panels[0].series[0].regenSteps;
    const ok =
      JSON.stringify(spikes) === JSON.stringify([1, 8, 27, 64, 125, 216]);
    expect(spikes).toEqual([1, 8, 27, 64, 125, 216]);
    console.log(`ACCEPT 12 timing-spikes-at-cubes: ${ok ? "PASS" : "FAIL"}`);
  });

  it("missing columns fail naming the offending header", () => {
    const out = mkdtempSync(join(tmpdir(), "plots-"));
    const bad = join(out, "bad.csv");
    require("fs").writeFileSync(bad, "method,scenario\nar,ma2\n");
    const code = main(["coverage", "--csv", bad, "--out", out]);
    expect(code).toBe(1);
  });

  it("cli rejects unknown kinds and missing flags", () => {
    expect(main(["histogram", "--out", "/tmp"])).toBe(1);
    expect(main(["coverage"])).toBe(1);
  });
});
