/** Single-page planner wiring: three panels over one workspace store.
 *
 * Each panel owns one in-flight request; launching a new one aborts the
 * superseded request. The full workspace state serializes into the URL
 * fragment for sharing.
 */

import { ApiClient, ApiError, type MoeRequest, type SweepRequest } from "./api.js";
import { expandView } from "./panels/expand.js";
import { predictView, renderPredictResult } from "./panels/predict.js";
import { buildSweepChart } from "./panels/sweep.js";
import {
  decodeShareLink,
  defaultWorkspace,
  encodeShareLink,
  GIANT_PRESET,
  pinResult,
  unpinResult,
  type WorkspaceState,
} from "./state.js";

let state: WorkspaceState = decodeShareLink(location.hash) ?? defaultWorkspace();

const controllers: Record<string, AbortController | null> = {
  predict: null,
  sweep: null,
  expand: null,
};

function freshSignal(panel: string): AbortSignal {
  controllers[panel]?.abort();
  const controller = new AbortController();
  controllers[panel] = controller;
  return controller.signal;
}

function client(): ApiClient {
  return new ApiClient(state.baseUrl);
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function showError(target: HTMLElement, error: unknown): void {
  if (error instanceof DOMException && error.name === "AbortError") return;
  const message =
    error instanceof ApiError ? `${error.code}: ${error.message}` : String(error);
  target.innerHTML = `<div class="error">${message
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")}</div>`;
}

function numberInput(id: string): number {
  return Number(el<HTMLInputElement>(id).value);
}

// ------------------------------------------------------------- predict

function readPredictForm(): void {
  state.predict = {
    ...state.predict,
    kind: el<HTMLSelectElement>("p-kind").value === "moe" ? "moe" : "dense",
    layers: numberInput("p-layers"),
    hidden: numberInput("p-hidden"),
    ffn: numberInput("p-ffn"),
    size: numberInput("p-size"),
    tokens: numberInput("p-tokens"),
    gamma: numberInput("p-gamma"),
    expertFfn: numberInput("p-expert-ffn"),
    act: numberInput("p-act"),
  };
}

async function runPredict(): Promise<void> {
  readPredictForm();
  const output = el("predict-result");
  output.textContent = "…";
  const form = state.predict;
  const base = {
    layers: form.layers,
    hidden: form.hidden,
    ffn: form.ffn,
    size: form.size,
    tokens: form.tokens,
    gamma: form.gamma,
  };
  try {
    const signal = freshSignal("predict");
    const result =
      form.kind === "moe"
        ? await client().predictMoe(
            { ...base, expert_ffn: form.expertFfn, act: form.act },
            signal,
          )
        : await client().predictDense(base, signal);
    output.innerHTML = renderPredictResult(predictView(result));
    el<HTMLButtonElement>("predict-pin").onclick = () => {
      state = pinResult(state, {
        label: `${form.kind} ${form.size}B @ ${form.tokens}T`,
        score: result.adjusted,
        detail: `raw ${result.raw}`,
      });
      renderPins();
    };
  } catch (error) {
    showError(output, error);
  }
}

// --------------------------------------------------------------- sweep

function readSweepForm(): void {
  state.sweep = {
    ...state.sweep,
    variable: (() => {
      const v = el<HTMLSelectElement>("s-variable").value;
      return v === "gamma" || v === "n_layers" ? v : "tokens";
    })(),
    lo: numberInput("s-lo"),
    hi: numberInput("s-hi"),
    steps: numberInput("s-steps"),
    gammas: el<HTMLInputElement>("s-gammas")
      .value.split(",")
      .map((part) => Number(part.trim()))
      .filter((value) => Number.isFinite(value) && value >= 0),
    layers: numberInput("s-layers"),
    hidden: numberInput("s-hidden"),
    ffn: numberInput("s-ffn"),
    size: numberInput("s-size"),
    tokens: numberInput("s-tokens"),
  };
}

async function runSweep(): Promise<void> {
  readSweepForm();
  const output = el("sweep-chart");
  output.textContent = "…";
  const form = state.sweep;
  try {
    const signal = freshSignal("sweep");
    const api = client();
    const requests = form.gammas.map((gamma) => {
      const body: SweepRequest = {
        variable: form.variable,
        lo: form.lo,
        hi: form.hi,
        steps: form.steps,
        arch: {
          layers: form.layers,
          hidden: form.hidden,
          ffn: form.ffn,
          size: form.size,
          tokens: form.tokens,
          gamma,
        },
      };
      return api.sweep(body, signal).then((result) => ({ gamma, result }));
    });
    const giant: MoeRequest = { ...GIANT_PRESET };
    const markerPromise = el<HTMLInputElement>("s-giant").checked
      ? api.predictMoe(giant, signal).then((r) => [
          { label: "giant preset", x: form.hi, y: r.adjusted },
        ])
      : Promise.resolve([]);
    const [results, markers] = await Promise.all([
      Promise.all(requests),
      markerPromise,
    ]);
    output.innerHTML = buildSweepChart(results, markers).svg;
  } catch (error) {
    showError(output, error);
  }
}

// -------------------------------------------------------------- expand

function readExpandForm(): void {
  state.expand = {
    ...state.expand,
    smallLayers: numberInput("e-small-layers"),
    smallHidden: numberInput("e-small-hidden"),
    smallFfn: numberInput("e-small-ffn"),
    smallSize: numberInput("e-small-size"),
    largeLayers: numberInput("e-large-layers"),
    largeHidden: numberInput("e-large-hidden"),
    largeFfn: numberInput("e-large-ffn"),
    largeSize: numberInput("e-large-size"),
    totalTokens: numberInput("e-total"),
    grid: numberInput("e-grid"),
  };
}

async function runExpand(): Promise<void> {
  readExpandForm();
  const output = el("expand-result");
  output.textContent = "…";
  const form = state.expand;
  try {
    const result = await client().expandOptimize(
      {
        small: {
          layers: form.smallLayers,
          hidden: form.smallHidden,
          ffn: form.smallFfn,
          size: form.smallSize,
        },
        large: {
          layers: form.largeLayers,
          hidden: form.largeHidden,
          ffn: form.largeFfn,
          size: form.largeSize,
        },
        total_tokens: form.totalTokens,
        grid: form.grid,
      },
      freshSignal("expand"),
    );
    const view = expandView(result);
    output.innerHTML =
      `<div class="row" title="${view.bestTitle}">${view.bestLine}</div>` + view.chart.svg;
  } catch (error) {
    showError(output, error);
  }
}

// ---------------------------------------------------------------- pins

function renderPins(): void {
  const target = el("pins");
  if (state.pinned.length === 0) {
    target.innerHTML = "<em>nothing pinned yet</em>";
    return;
  }
  target.innerHTML = state.pinned
    .map(
      (pin, i) =>
        `<div class="pin" title="${pin.detail}">` +
        `<span>${pin.label}</span><strong>${pin.score.toFixed(2)}</strong>` +
        `<button data-unpin="${i}">x</button></div>`,
    )
    .join("");
  target.querySelectorAll<HTMLButtonElement>("button[data-unpin]").forEach((button) => {
    button.onclick = () => {
      state = unpinResult(state, Number(button.dataset.unpin));
      renderPins();
    };
  });
}

// ---------------------------------------------------------------- init

function fillForms(): void {
  el<HTMLInputElement>("base-url").value = state.baseUrl;
  const p = state.predict;
  el<HTMLSelectElement>("p-kind").value = p.kind;
  el<HTMLInputElement>("p-layers").value = String(p.layers);
  el<HTMLInputElement>("p-hidden").value = String(p.hidden);
  el<HTMLInputElement>("p-ffn").value = String(p.ffn);
  el<HTMLInputElement>("p-size").value = String(p.size);
  el<HTMLInputElement>("p-tokens").value = String(p.tokens);
  el<HTMLInputElement>("p-gamma").value = String(p.gamma);
  el<HTMLInputElement>("p-expert-ffn").value = String(p.expertFfn);
  el<HTMLInputElement>("p-act").value = String(p.act);
  const s = state.sweep;
  el<HTMLSelectElement>("s-variable").value = s.variable;
  el<HTMLInputElement>("s-lo").value = String(s.lo);
  el<HTMLInputElement>("s-hi").value = String(s.hi);
  el<HTMLInputElement>("s-steps").value = String(s.steps);
  el<HTMLInputElement>("s-gammas").value = s.gammas.join(", ");
  el<HTMLInputElement>("s-layers").value = String(s.layers);
  el<HTMLInputElement>("s-hidden").value = String(s.hidden);
  el<HTMLInputElement>("s-ffn").value = String(s.ffn);
  el<HTMLInputElement>("s-size").value = String(s.size);
  el<HTMLInputElement>("s-tokens").value = String(s.tokens);
  const e = state.expand;
  el<HTMLInputElement>("e-small-layers").value = String(e.smallLayers);
  el<HTMLInputElement>("e-small-hidden").value = String(e.smallHidden);
  el<HTMLInputElement>("e-small-ffn").value = String(e.smallFfn);
  el<HTMLInputElement>("e-small-size").value = String(e.smallSize);
  el<HTMLInputElement>("e-large-layers").value = String(e.largeLayers);
  el<HTMLInputElement>("e-large-hidden").value = String(e.largeHidden);
  el<HTMLInputElement>("e-large-ffn").value = String(e.largeFfn);
  el<HTMLInputElement>("e-large-size").value = String(e.largeSize);
  el<HTMLInputElement>("e-total").value = String(e.totalTokens);
  el<HTMLInputElement>("e-grid").value = String(e.grid);
}

export function init(): void {
  fillForms();
  renderPins();

  el<HTMLInputElement>("base-url").onchange = (event) => {
    state.baseUrl = (event.target as HTMLInputElement).value.replace(/\/$/, "");
  };
  el<HTMLButtonElement>("predict-run").onclick = () => void runPredict();
  el<HTMLButtonElement>("sweep-run").onclick = () => void runSweep();
  el<HTMLButtonElement>("expand-run").onclick = () => void runExpand();
  el<HTMLButtonElement>("share").onclick = () => {
    readPredictForm();
    readSweepForm();
    readExpandForm();
    const link = encodeShareLink(state);
    history.replaceState(null, "", link);
    void navigator.clipboard?.writeText(location.href);
    el("share-status").textContent = "link copied to URL bar";
  };
  window.addEventListener("hashchange", () => {
    const restored = decodeShareLink(location.hash);
    if (restored) {
      state = restored;
      fillForms();
      renderPins();
    }
  });
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  init();
}
