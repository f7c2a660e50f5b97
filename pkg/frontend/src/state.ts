/** Workspace store: the full UI state, serializable into a share link.
 *
 * The state is a plain JSON value so it can round-trip through
 * base64url in the URL fragment. Pinned results are capped; pinning
 * past the cap drops the oldest pin.
 */

export const MAX_PINS = 8;
export const SHARE_PREFIX = "#ws=";

export interface PredictForm {
  kind: "dense" | "moe";
  layers: number;
  hidden: number;
  ffn: number;
  size: number;
  tokens: number;
  gamma: number;
  expertFfn: number;
  act: number;
}

export interface SweepForm {
  variable: "gamma" | "tokens" | "n_layers";
  lo: number;
  hi: number;
  steps: number;
  /** One series is requested per gamma value. */
  gammas: number[];
  layers: number;
  hidden: number;
  ffn: number;
  size: number;
  tokens: number;
}

export interface ExpandForm {
  smallLayers: number;
  smallHidden: number;
  smallFfn: number;
  smallSize: number;
  largeLayers: number;
  largeHidden: number;
  largeFfn: number;
  largeSize: number;
  totalTokens: number;
  grid: number;
}

export interface Pin {
  label: string;
  score: number;
  detail: string;
}

export interface WorkspaceState {
  baseUrl: string;
  predict: PredictForm;
  sweep: SweepForm;
  expand: ExpandForm;
  pinned: Pin[];
}

export function defaultWorkspace(): WorkspaceState {
  return {
    baseUrl: "http://127.0.0.1:8000",
    predict: {
      kind: "dense",
      layers: 32,
      hidden: 4096,
      ffn: 14336,
      size: 7,
      tokens: 3,
      gamma: 1,
      expertFfn: 14336,
      act: 13,
    },
    sweep: {
      variable: "tokens",
      lo: 1,
      hi: 60,
      steps: 13,
      gammas: [1.0, 1.5],
      layers: 80,
      hidden: 8192,
      ffn: 28672,
      size: 70,
      tokens: 15,
    },
    expand: {
      smallLayers: 32,
      smallHidden: 4096,
      smallFfn: 14336,
      smallSize: 7,
      largeLayers: 80,
      largeHidden: 8192,
      largeFfn: 28672,
      largeSize: 70,
      totalTokens: 4,
      grid: 21,
    },
    pinned: [],
  };
}

/** The giant sparse-model preset shown as a reference marker. */
export const GIANT_PRESET = {
  layers: 1300,
  hidden: 51200,
  ffn: 65536,
  expert_ffn: 65536,
  size: 125000,
  act: 22000,
  gamma: 1.9,
  tokens: 100,
};

export function pinResult(state: WorkspaceState, pin: Pin): WorkspaceState {
  const pinned = [...state.pinned, pin].slice(-MAX_PINS);
  return { ...state, pinned };
}

export function unpinResult(state: WorkspaceState, index: number): WorkspaceState {
  const pinned = state.pinned.filter((_, i) => i !== index);
  return { ...state, pinned };
}

function toBase64Url(text: string): string {
  const bytes = new TextEncoder().encode(text);
  let binary = "";
  for (const byte of bytes) binary += String.fromCharCode(byte);
  return btoa(binary).replace(/\+/g, "-").replace(/\//g, "_").replace(/=+$/, "");
}

function fromBase64Url(encoded: string): string {
  const padded = encoded.replace(/-/g, "+").replace(/_/g, "/");
  const binary = atob(padded + "=".repeat((4 - (padded.length % 4)) % 4));
  const bytes = Uint8Array.from(binary, (c) => c.charCodeAt(0));
  return new TextDecoder().decode(bytes);
}

/** Encode the workspace into a URL fragment ("#ws=..."). */
export function encodeShareLink(state: WorkspaceState): string {
  return SHARE_PREFIX + toBase64Url(JSON.stringify(state));
}

function isFiniteNumber(value: unknown): value is number {
  return typeof value === "number" && Number.isFinite(value);
}

function asObject(value: unknown): Record<string, unknown> | null {
  return typeof value === "object" && value !== null && !Array.isArray(value)
    ? (value as Record<string, unknown>)
    : null;
}

/** Merge a decoded candidate onto the defaults, keeping only values of
 * the expected type so a stale or tampered link degrades gracefully. */
function mergeTyped<T extends object>(base: T, raw: unknown): T {
  const candidate = asObject(raw);
  if (!candidate) return base;
  const baseRecord = base as Record<string, unknown>;
  const out: Record<string, unknown> = { ...baseRecord };
  for (const key of Object.keys(baseRecord)) {
    const baseValue = baseRecord[key];
    const value = candidate[key];
    if (value === undefined) continue;
    if (isFiniteNumber(baseValue) && isFiniteNumber(value)) out[key] = value;
    else if (typeof baseValue === "string" && typeof value === "string") out[key] = value;
  }
  return out as T;
}

/** Decode a share link back into a workspace. Returns null when the
 * fragment is absent or unreadable. */
export function decodeShareLink(hash: string): WorkspaceState | null {
  if (!hash.startsWith(SHARE_PREFIX)) return null;
  let raw: unknown;
  try {
    raw = JSON.parse(fromBase64Url(hash.slice(SHARE_PREFIX.length)));
  } catch {
    return null;
  }
  const candidate = asObject(raw);
  if (!candidate) return null;

  const defaults = defaultWorkspace();
  const state: WorkspaceState = {
    baseUrl:
      typeof candidate.baseUrl === "string" ? candidate.baseUrl : defaults.baseUrl,
    predict: mergeTyped(defaults.predict, candidate.predict),
    sweep: mergeTyped(defaults.sweep, candidate.sweep),
    expand: mergeTyped(defaults.expand, candidate.expand),
    pinned: [],
  };

  // Enum-valued fields: mergeTyped accepts any string, so re-validate.
  const kind = state.predict.kind as string;
  if (kind !== "dense" && kind !== "moe") state.predict.kind = defaults.predict.kind;
  const variable = state.sweep.variable as string;
  if (variable !== "gamma" && variable !== "tokens" && variable !== "n_layers") {
    state.sweep.variable = defaults.sweep.variable;
  }
  const sweepCandidate = asObject(candidate.sweep);
  if (sweepCandidate && Array.isArray(sweepCandidate.gammas)) {
    const gammas = sweepCandidate.gammas.filter(isFiniteNumber);
    if (gammas.length > 0) state.sweep.gammas = gammas;
  }

  if (Array.isArray(candidate.pinned)) {
    for (const entry of candidate.pinned.slice(-MAX_PINS)) {
      const pin = asObject(entry);
      if (
        pin &&
        typeof pin.label === "string" &&
        isFiniteNumber(pin.score) &&
        typeof pin.detail === "string"
      ) {
        state.pinned.push({ label: pin.label, score: pin.score, detail: pin.detail });
      }
    }
  }
  return state;
}
