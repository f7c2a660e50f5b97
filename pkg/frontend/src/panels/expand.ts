/** Expansion panel: split a total token budget around a growth event. */

import type { ExpandOptimizeResult } from "../api.js";
import { buildChart, type RenderedChart } from "../chart.js";

export interface ExpandView {
  bestLine: string;
  bestTitle: string;
  chart: RenderedChart;
}

export function expandView(result: ExpandOptimizeResult): ExpandView {
  const chart = buildChart(
    [
      {
        label: "score by expansion point",
        points: result.curve.map((p) => ({ x: p.small_tokens, y: p.score })),
      },
    ],
    {
      xLabel: "tokens before expansion (T)",
      yLabel: "predicted score",
      markers: [
        { label: "best", x: result.best.small_tokens, y: result.best.score },
      ],
    },
  );
  return {
    bestLine:
      `expand after ${result.best.small_tokens.toFixed(2)}T ` +
      `(then ${result.best.large_tokens.toFixed(2)}T more) -> ` +
      `${result.best.score.toFixed(2)}`,
    bestTitle: String(result.best.score),
    chart,
  };
}
