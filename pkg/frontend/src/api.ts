/** Typed client for the perflaw /v1 JSON API.
 *
 * Every response uses one envelope:
 *   {"ok": true,  "result": {...}}
 *   {"ok": false, "error": {"code": "...", "message": "..."}}
 * The client unwraps it and surfaces failures as ApiError with the
 * service's stable machine-readable code.
 */

export interface ErrorBody {
  code: string;
  message: string;
}

export interface Envelope<T> {
  ok: boolean;
  result?: T;
  error?: ErrorBody;
}

export class ApiError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly status: number,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export interface DenseRequest {
  layers: number;
  hidden: number;
  ffn: number;
  size: number;
  tokens: number;
  gamma?: number;
}

export interface MoeRequest extends DenseRequest {
  expert_ffn: number;
  act: number;
}

export interface PredictResult {
  raw: number;
  adjusted: number;
  effective_tokens: number;
  discount: number;
  token_clipped: boolean;
  expansion_factor: number | null;
  mmlu_pro: number | null;
}

export interface SweepRequest {
  variable: "gamma" | "tokens" | "n_layers";
  lo: number;
  hi: number;
  steps: number;
  arch: DenseRequest | MoeRequest;
}

export interface SweepPoint {
  x: number;
  score: number;
}

export interface SweepResult {
  variable: string;
  points: SweepPoint[];
}

export interface ArchBody {
  layers: number;
  hidden: number;
  ffn: number;
  size: number;
  gamma?: number;
}

export interface ExpandPredictRequest {
  small: ArchBody;
  small_tokens: number;
  large: ArchBody;
  large_tokens: number;
  recovery_scale?: number;
}

export interface ExpandPredictResult extends Omit<PredictResult, "mmlu_pro"> {
  ratio: number;
}

export interface ExpandOptimizeRequest {
  small: ArchBody;
  large: ArchBody;
  total_tokens: number;
  grid?: number;
}

export interface SplitPoint {
  small_tokens: number;
  large_tokens: number;
  score: number;
}

export interface ExpandOptimizeResult {
  best: SplitPoint;
  curve: SplitPoint[];
}

export interface ZooRow {
  name: string;
  predicted: number;
  reported: number;
  diff: number;
  tags: string[];
}

export interface ZooReport {
  rows: ZooRow[];
  mae: number;
  pearson_r: number | null;
  subsets: Record<string, { n: number; mae: number; pearson_r: number | null }>;
}

export interface WeightsResult {
  weights: { w1: number; w2: number; w3: number; w4: number; b: number };
}

/** Injectable for tests; matches the WHATWG fetch shape we use. */
export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string; signal?: AbortSignal },
) => Promise<Response>;

export class ApiClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(
    method: "GET" | "POST",
    path: string,
    body?: unknown,
    signal?: AbortSignal,
  ): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
      signal,
    });
    let envelope: Envelope<T>;
    try {
      envelope = (await response.json()) as Envelope<T>;
    } catch {
      throw new ApiError("BAD_RESPONSE", `non-JSON response (HTTP ${response.status})`, response.status);
    }
    if (!envelope.ok || envelope.result === undefined) {
      const error = envelope.error ?? { code: "UNKNOWN", message: "malformed error envelope" };
      throw new ApiError(error.code, error.message, response.status);
    }
    return envelope.result;
  }

  predictDense(req: DenseRequest, signal?: AbortSignal): Promise<PredictResult> {
    return this.request("POST", "/v1/predict/dense", req, signal);
  }

  predictMoe(req: MoeRequest, signal?: AbortSignal): Promise<PredictResult> {
    return this.request("POST", "/v1/predict/moe", req, signal);
  }

  sweep(req: SweepRequest, signal?: AbortSignal): Promise<SweepResult> {
    return this.request("POST", "/v1/sweep", req, signal);
  }

  expandPredict(req: ExpandPredictRequest, signal?: AbortSignal): Promise<ExpandPredictResult> {
    return this.request("POST", "/v1/expand/predict", req, signal);
  }

  expandOptimize(req: ExpandOptimizeRequest, signal?: AbortSignal): Promise<ExpandOptimizeResult> {
    return this.request("POST", "/v1/expand/optimize", req, signal);
  }

  zooReport(signal?: AbortSignal): Promise<ZooReport> {
    return this.request("GET", "/v1/zoo/report", undefined, signal);
  }

  weights(signal?: AbortSignal): Promise<WeightsResult> {
    return this.request("GET", "/v1/weights", undefined, signal);
  }
}
