/**
 * Figure assembly: multi-panel chart options plus the exact plotted points.
 *
 * Reference lines (nominal level, long-run variance per scenario) come from
 * the metadata sidecars, never from constants baked in here.
 */

import {
  CoveragePoint,
  TimingSeries,
  VariancePoint,
  coveragePoints,
  timingSeries,
  variancePoints,
} from "./aggregate";
import { ResultRow, RunMetadata, SchemaError } from "./schema";

export type FigureKind = "coverage" | "variance" | "timing";

export interface PanelPoints {
  scenario: string;
  reference: number | null;
  series: {
    method: string;
    points: Array<[number, number]>;
    band?: Array<[number, number, number]>; // n, lower, upper
    regenSteps?: number[];
  }[];
}

export interface FigureData {
  kind: FigureKind;
  level: number | null;
  panels: PanelPoints[];
}

export interface SourceFile {
  rows: ResultRow[];
  metadata: RunMetadata | null;
}

const PANEL_WIDTH = 360;
const PANEL_HEIGHT = 300;
const METHOD_COLORS: Record<string, string> = {
  ar: "#c23531",
  iid: "#2f4554",
  block: "#61a0a8",
};

function scenarioOrder(rows: ResultRow[]): string[] {
  const seen: string[] = [];
  for (const row of rows) {
    if (!seen.includes(row.scenario)) seen.push(row.scenario);
  }
  return seen;
}

function referenceFor(
  kind: FigureKind,
  scenario: string,
  sources: SourceFile[],
): number | null {
  for (const src of sources) {
    if (!src.metadata) continue;
    const cfgScenario = (src.metadata.config as any)?.scenario?.tag;
    if (cfgScenario !== scenario) continue;
    if (kind === "coverage") {
      return src.metadata.level ?? null;
    }
    if (kind === "variance") {
      return src.metadata.oracle?.sigma_inf?.value ?? null;
    }
  }
  return null;
}

export function buildFigureData(
  kind: FigureKind,
  sources: SourceFile[],
): FigureData {
  const rows = sources.flatMap((s) => s.rows);
  if (rows.length === 0) {
    throw new SchemaError("no rows to plot");
  }
  const level =
    sources.map((s) => s.metadata?.level).find((v) => v != null) ?? null;
  const panels: PanelPoints[] = [];
  if (kind === "coverage") {
    const points = coveragePoints(rows);
    for (const scenario of scenarioOrder(rows)) {
      const mine = points.filter((p) => p.scenario === scenario);
      const methods = [...new Set(mine.map((p) => p.method))].sort();
      panels.push({
        scenario,
        reference: referenceFor(kind, scenario, sources),
        series: methods.map((method) => ({
          method,
          points: mine
            .filter((p) => p.method === method)
            .map((p): [number, number] => [p.n, p.rate]),
        })),
      });
    }
  } else if (kind === "variance") {
    const points = variancePoints(rows);
    for (const scenario of scenarioOrder(rows)) {
      const mine = points.filter((p) => p.scenario === scenario);
      const methods = [...new Set(mine.map((p) => p.method))].sort();
      panels.push({
        scenario,
        reference: referenceFor(kind, scenario, sources),
        series: methods.map((method) => {
          const pts = mine.filter((p) => p.method === method);
          return {
            method,
            points: pts.map((p): [number, number] => [p.n, p.mean]),
            band: pts.map((p): [number, number, number] => [
              p.n,
              p.mean - p.std,
              p.mean + p.std,
            ]),
          };
        }),
      });
    }
  } else {
    const traces = timingSeries(rows);
    for (const scenario of scenarioOrder(rows)) {
      const mine = traces.filter((t) => t.scenario === scenario);
      panels.push({
        scenario,
        reference: null,
        series: mine.map((trace) => ({
          method: trace.method,
          points: trace.steps.map(
            (t, i): [number, number] => [t, trace.elapsedUs[i]],
          ),
          regenSteps: trace.regenSteps,
        })),
      });
    }
  }
  return { kind, level, panels };
}

/** ECharts option for a multi-panel figure; pure data, no DOM access. */
export function figureOption(data: FigureData): Record<string, unknown> {
  const nPanels = data.panels.length;
  const grids: unknown[] = [];
  const xAxes: unknown[] = [];
  const yAxes: unknown[] = [];
  const series: unknown[] = [];
  const titles: unknown[] = [];
  data.panels.forEach((panel, i) => {
    grids.push({
      left: 60 + i * PANEL_WIDTH,
      top: 50,
      width: PANEL_WIDTH - 90,
      height: PANEL_HEIGHT - 100,
    });
    titles.push({
      text: panel.scenario,
      left: 60 + i * PANEL_WIDTH + (PANEL_WIDTH - 90) / 2,
      top: 12,
      textAlign: "center",
      textStyle: { fontSize: 14 },
    });
    xAxes.push({
      gridIndex: i,
      type: "log",
      logBase: 10,
      name: data.kind === "timing" ? "t" : "n",
      nameLocation: "middle",
      nameGap: 26,
    });
    yAxes.push({
      gridIndex: i,
      type: data.kind === "timing" ? "log" : "value",
      name:
        data.kind === "coverage"
          ? "coverage"
          : data.kind === "variance"
            ? "variance estimate"
            : "per-update time (us)",
      min: data.kind === "coverage" ? 0 : undefined,
      max: data.kind === "coverage" ? 1 : undefined,
    });
    for (const s of panel.series) {
      const base: Record<string, unknown> = {
        name: s.method,
        type: "line",
        xAxisIndex: i,
        yAxisIndex: i,
        data: s.points,
        symbolSize: data.kind === "timing" ? 0 : 6,
        lineStyle: { width: data.kind === "timing" ? 1 : 2 },
        color: METHOD_COLORS[s.method],
      };
      if (panel.reference != null && s === panel.series[0]) {
        base.markLine = {
          silent: true,
          symbol: "none",
          label: { show: false },
          lineStyle: { color: "#333", type: "solid", width: 1 },
          data: [{ yAxis: panel.reference }],
        };
      }
      if (s.regenSteps && s.regenSteps.length > 0) {
        base.markPoint = {
          symbol: "triangle",
          symbolSize: 8,
          label: { show: false },
          data: s.regenSteps.map((t) => {
            const idx = s.points.findIndex((p) => p[0] === t);
            return { coord: s.points[idx >= 0 ? idx : 0] };
          }),
        };
      }
      series.push(base);
      if (s.band) {
        series.push({
          name: `${s.method} lower`,
          type: "line",
          xAxisIndex: i,
          yAxisIndex: i,
          data: s.band.map((b) => [b[0], b[1]]),
          lineStyle: { width: 1, type: "dashed" },
          symbolSize: 0,
          color: METHOD_COLORS[s.method],
        });
        series.push({
          name: `${s.method} upper`,
          type: "line",
          xAxisIndex: i,
          yAxisIndex: i,
          data: s.band.map((b) => [b[0], b[2]]),
          lineStyle: { width: 1, type: "dashed" },
          symbolSize: 0,
          color: METHOD_COLORS[s.method],
        });
      }
    }
  });
  return {
    animation: false,
    title: titles,
    grid: grids,
    xAxis: xAxes,
    yAxis: yAxes,
    series,
    legend: { top: PANEL_HEIGHT - 24, left: 60 },
  };
}

export function figureSize(data: FigureData): { width: number; height: number } {
  return {
    width: Math.max(1, data.panels.length) * PANEL_WIDTH + 40,
    height: PANEL_HEIGHT + 30,
  };
}
