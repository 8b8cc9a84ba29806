/**
 * Server-side SVG rendering plus the machine-readable points sidecar.
 *
 * Rendering is a pure function of (CSV bytes, figure kind): fixed dimensions,
 * no timestamps, so re-rendering the same inputs produces identical bytes.
 * The sidecar carries the exact plotted values for downstream verification.
 */

import * as echarts from "echarts";
import { readFileSync, writeFileSync, existsSync } from "fs";
import { join } from "path";

import { FigureData, FigureKind, SourceFile, buildFigureData, figureOption, figureSize } from "./figures";
import { parseMetadata, parseResultsCsv } from "./schema";

export function loadSources(csvPaths: string[], metaPaths: string[]): SourceFile[] {
  return csvPaths.map((csvPath, i) => {
    const rows = parseResultsCsv(readFileSync(csvPath, "utf-8"));
    const metaPath = metaPaths[i] ?? `${csvPath}.meta.json`;
    const metadata = existsSync(metaPath)
      ? parseMetadata(readFileSync(metaPath, "utf-8"))
      : null;
    return { rows, metadata };
  });
}

/**
 * The renderer embeds a process-global instance counter in CSS class names
 * (zr0-cls-4, zr1-cls-9, ...). Renumber tokens in order of first appearance
 * so identical inputs yield identical bytes.
 */
export function normalizeSvg(svg: string): string {
  const renamed = svg.replace(/zr\d+-/g, "zr-");
  const mapping = new Map<string, string>();
  return renamed.replace(/zr-cls-\d+/g, (token) => {
    let replacement = mapping.get(token);
    if (replacement === undefined) {
      replacement = `zr-cls-${mapping.size}`;
      mapping.set(token, replacement);
    }
    return replacement;
  });
}

export function renderSvg(data: FigureData): string {
  const { width, height } = figureSize(data);
  const chart = echarts.init(null, null, {
    renderer: "svg",
    ssr: true,
    width,
    height,
  });
  try {
    chart.setOption(figureOption(data));
    return normalizeSvg(chart.renderToSVGString());
  } finally {
    chart.dispose();
  }
}

export interface RenderOutput {
  svgPath: string;
  pointsPath: string;
  data: FigureData;
}

export function renderFigure(
  kind: FigureKind,
  csvPaths: string[],
  metaPaths: string[],
  outDir: string,
): RenderOutput {
  const sources = loadSources(csvPaths, metaPaths);
  const data = buildFigureData(kind, sources);
  const svg = renderSvg(data);
  const svgPath = join(outDir, `${kind}.svg`);
  const pointsPath = join(outDir, `${kind}.points.json`);
  writeFileSync(svgPath, svg);
  writeFileSync(pointsPath, JSON.stringify(data, null, 2) + "\n");
  return { svgPath, pointsPath, data };
}
