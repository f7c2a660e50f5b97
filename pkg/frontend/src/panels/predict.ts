/** Predict panel: one configuration -> one score card.
 *
 * The view layer is split into a pure render model (testable) and an
 * HTML string builder. Display rounds to 2 decimals; the full-precision
 * value is exposed via title attributes (tooltips).
 */

import type { PredictResult } from "../api.js";

export interface PredictView {
  /** 2-decimal adjusted score, e.g. "60.14" — the panel headline. */
  headline: string;
  /** Full-precision adjusted score for the tooltip. */
  headlineTitle: string;
  rows: { label: string; value: string; title: string }[];
}

export function predictView(result: PredictResult): PredictView {
  const rows = [
    { label: "raw score", value: result.raw.toFixed(2), title: String(result.raw) },
    {
      label: "instability discount",
      value: result.discount.toFixed(4),
      title: String(result.discount),
    },
    {
      label: "effective tokens",
      value: `${result.effective_tokens.toFixed(2)}T${result.token_clipped ? " (clipped)" : ""}`,
      title: String(result.effective_tokens),
    },
  ];
  if (result.expansion_factor !== null) {
    rows.push({
      label: "expansion factor",
      value: result.expansion_factor.toFixed(4),
      title: String(result.expansion_factor),
    });
  }
  if (result.mmlu_pro !== null) {
    rows.push({
      label: "MMLU-Pro estimate",
      value: result.mmlu_pro.toFixed(2),
      title: String(result.mmlu_pro),
    });
  }
  return {
    headline: result.adjusted.toFixed(2),
    headlineTitle: String(result.adjusted),
    rows,
  };
}

function escapeHtml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderPredictResult(view: PredictView): string {
  const rows = view.rows
    .map(
      (row) =>
        `<div class="row"><span>${escapeHtml(row.label)}</span>` +
        `<span title="${escapeHtml(row.title)}">${escapeHtml(row.value)}</span></div>`,
    )
    .join("");
  return (
    `<div class="score" title="${escapeHtml(view.headlineTitle)}">` +
    `${escapeHtml(view.headline)}</div>${rows}`
  );
}
