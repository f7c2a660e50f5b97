import { describe, expect, it } from "vitest";

import { ApiClient, type PredictResult } from "../src/api.js";
import { predictView, renderPredictResult } from "../src/panels/predict.js";
import { loadFixture, replayFetch } from "./helpers.js";

const dense = loadFixture<PredictResult>("predict_dense");
const giant = loadFixture<PredictResult>("predict_moe_giant");

describe("predict panel", () => {
  it("displays 60.14 for the reference dense config", async () => {
    const client = new ApiClient("http://svc", replayFetch([dense]));
    const result = await client.predictDense(
      dense.request as Parameters<ApiClient["predictDense"]>[0],
    );
    const view = predictView(result);
    expect(view.headline).toBe("60.14");
    const html = renderPredictResult(view);
    expect(html).toContain(">60.14</div>");
  });

  it("keeps full precision in the tooltip", async () => {
    const client = new ApiClient("http://svc", replayFetch([dense]));
    const result = await client.predictDense(
      dense.request as Parameters<ApiClient["predictDense"]>[0],
    );
    const view = predictView(result);
    expect(view.headlineTitle).toBe("60.13969302998589");
    expect(renderPredictResult(view)).toContain('title="60.13969302998589"');
  });

  it("shows the MMLU-Pro row only when the service provides one", () => {
    const denseView = predictView(dense.response.result as PredictResult);
    expect(denseView.rows.some((r) => r.label.includes("MMLU-Pro"))).toBe(false);

    const giantView = predictView(giant.response.result as PredictResult);
    expect(giantView.rows.some((r) => r.label.includes("MMLU-Pro"))).toBe(true);
  });

  it("marks clipped token budgets", () => {
    const clipped: PredictResult = {
      ...(dense.response.result as PredictResult),
      token_clipped: true,
    };
    const view = predictView(clipped);
    const row = view.rows.find((r) => r.label === "effective tokens");
    expect(row?.value).toContain("(clipped)");
  });
});
