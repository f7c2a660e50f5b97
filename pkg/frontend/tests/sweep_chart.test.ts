import { describe, expect, it } from "vitest";

import { ApiClient, type PredictResult, type SweepResult } from "../src/api.js";
import { buildSweepChart } from "../src/panels/sweep.js";
import { loadFixture, replayFetch } from "./helpers.js";

const low = loadFixture<SweepResult>("sweep_tokens_gamma_1_0");
const high = loadFixture<SweepResult>("sweep_tokens_gamma_1_5");
const giant = loadFixture<PredictResult>("predict_moe_giant");

async function recordedSeries() {
  const client = new ApiClient("http://svc", replayFetch([low, high]));
  const [a, b] = await Promise.all([
    client.sweep(low.request as Parameters<ApiClient["sweep"]>[0]),
    client.sweep(high.request as Parameters<ApiClient["sweep"]>[0]),
  ]);
  return [
    { gamma: 1.0, result: a },
    { gamma: 1.5, result: b },
  ];
}

describe("sweep chart", () => {
  it("renders two gamma series as two polylines", async () => {
    const chart = buildSweepChart(await recordedSeries());
    expect(chart.series).toHaveLength(2);
    expect(chart.svg.match(/<polyline /g)).toHaveLength(2);
    expect(chart.svg).toContain('data-series="gamma=1"');
    expect(chart.svg).toContain('data-series="gamma=1.5"');
  });

  it("series share the x grid and do not cross", async () => {
    const chart = buildSweepChart(await recordedSeries());
    const [a, b] = chart.series;
    expect(a!.path.length).toBe(13);
    expect(b!.path.length).toBe(13);
    for (let i = 0; i < a!.path.length; i++) {
      expect(a!.path[i]!.px).toBeCloseTo(b!.path[i]!.px, 9);
      // higher score -> smaller py; gamma=1.0 beats gamma=1.5 everywhere
      expect(a!.path[i]!.py).toBeLessThan(b!.path[i]!.py);
    }
  });

  it("scores are monotone along the token axis (sanity on the fixture)", () => {
    const points = (low.response.result as SweepResult).points;
    for (let i = 1; i < points.length; i++) {
      expect(points[i]!.score).toBeGreaterThanOrEqual(points[i - 1]!.score);
    }
  });

  it("places the giant-preset marker near 94.77", () => {
    const adjusted = (giant.response.result as PredictResult).adjusted;
    expect(Math.abs(adjusted - 94.77)).toBeLessThan(0.5);
    const chart = buildSweepChart(
      [{ gamma: 1.0, result: low.response.result as SweepResult }],
      [{ label: "giant preset", x: 60, y: adjusted }],
    );
    expect(chart.svg).toContain('data-marker="giant preset"');
    expect(chart.svg).toContain("(94.77)");
  });
});
