/** Sweep panel: one series per gamma value over a shared grid. */

import type { SweepResult } from "../api.js";
import { buildChart, type Marker, type RenderedChart, type Series } from "../chart.js";

export function sweepSeries(label: string, result: SweepResult): Series {
  return {
    label,
    points: result.points.map((p) => ({ x: p.x, y: p.score })),
  };
}

export function buildSweepChart(
  results: { gamma: number; result: SweepResult }[],
  markers: Marker[] = [],
): RenderedChart {
  const variable = results[0]?.result.variable ?? "x";
  const series = results.map(({ gamma, result }) =>
    sweepSeries(`gamma=${gamma}`, result),
  );
  return buildChart(series, {
    xLabel: variable,
    yLabel: "predicted score",
    markers,
  });
}
