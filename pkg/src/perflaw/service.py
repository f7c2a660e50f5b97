"""Stateless JSON-over-HTTP facade over the library.

Every endpoint is a thin adapter around a library call: request bodies
are parsed into domain objects, results serialized at full double
precision, and errors mapped to a uniform envelope::

    {"ok": true,  "result": {...}}
    {"ok": false, "error": {"code": "...", "message": "..."}}

Structurally bad requests get HTTP 400; domain violations get 422 with
the library's stable error codes. The zoo dataset and the active weights
are loaded once at startup and never mutated, so identical requests
always produce identical responses.
"""

from __future__ import annotations

import json

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import _parse, calibration, planner, zoo
from .core import DEFAULT_WEIGHTS, RegressionWeights, mmlu_to_mmlu_pro, predict_dense, predict_moe
from .errors import PerflawError, RequestError

__all__ = ["create_app", "serve"]


def _ok(result) -> JSONResponse:
    return JSONResponse(status_code=200, content={"ok": True, "result": result})


def _err(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"ok": False, "error": {"code": code, "message": message}},
    )


def _int_range(value, what: str) -> planner.IntRange:
    if (
        not isinstance(value, list)
        or len(value) not in (2, 3)
        or any(isinstance(v, bool) or not isinstance(v, int) for v in value)
    ):
        raise RequestError(f"field {what!r} must be an array [lo, hi] or [lo, hi, step]")
    return planner.IntRange(*value)


def _ratio_range(value) -> planner.RatioRange:
    if (
        not isinstance(value, list)
        or len(value) != 3
        or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in value)
    ):
        raise RequestError("field 'moe' must be an array [lo, hi, steps]")
    return planner.RatioRange(float(value[0]), float(value[1]), int(value[2]))


def _with_mmlu_pro(result) -> dict:
    payload = result.to_json_dict()
    payload["mmlu_pro"] = (
        mmlu_to_mmlu_pro(result.adjusted_score) if result.adjusted_score > 70.0 else None
    )
    return payload


def create_app(
    dataset_path: str | None = None,
    weights: RegressionWeights = DEFAULT_WEIGHTS,
    cors_origins: tuple[str, ...] = (),
) -> FastAPI:
    """Build the application around an immutable (weights, zoo) snapshot."""
    records = zoo.load_zoo(dataset_path)
    report = zoo.evaluate_zoo(records, weights)

    app = FastAPI(title="perflaw", version="0.1.0", docs_url=None, redoc_url=None)
    if cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(cors_origins),
            allow_methods=["*"],
            allow_headers=["*"],
        )

    def endpoint(path: str):
        """POST route whose handler takes the parsed JSON body mapping."""

        def register(handler):
            async def wrapper(request: Request) -> JSONResponse:
                try:
                    body = json.loads(await request.body())
                except (json.JSONDecodeError, UnicodeDecodeError):
                    return _err(400, "BAD_JSON", "request body is not valid JSON")
                try:
                    result = handler(_parse.require_mapping(body, "request body"))
                except RequestError as e:
                    return _err(400, e.code, str(e))
                except PerflawError as e:
                    return _err(422, e.code, str(e))
                return _ok(result)

            app.post(path)(wrapper)
            return handler

        return register

    @endpoint("/v1/predict/dense")
    def predict_dense_endpoint(body: dict) -> dict:
        arch = _parse.dense_arch(body)
        return _with_mmlu_pro(predict_dense(arch, _parse.training(body), weights))

    @endpoint("/v1/predict/moe")
    def predict_moe_endpoint(body: dict) -> dict:
        arch = _parse.moe_arch(body)
        return _with_mmlu_pro(predict_moe(arch, _parse.training(body), weights))

    @endpoint("/v1/sweep")
    def sweep_endpoint(body: dict) -> dict:
        arch_body = _parse.require_mapping(body.get("arch"), "field 'arch'")
        variable = body.get("variable")
        if variable not in planner.SWEEP_VARIABLES:
            raise RequestError(
                f"field 'variable' must be one of {', '.join(planner.SWEEP_VARIABLES)}"
            )
        spec = planner.SweepSpec(
            variable=variable,
            lo=_parse.get_number(body, "lo"),
            hi=_parse.get_number(body, "hi"),
            steps=_parse.get_count(body, "steps"),
            arch=_parse.arch_by_kind(arch_body),
            train=_parse.training(arch_body),
        )
        points = planner.sweep(spec, weights)
        return {"variable": variable, "points": [{"x": x, "score": s} for x, s in points]}

    @endpoint("/v1/search")
    def search_endpoint(body: dict) -> dict:
        constraints = planner.SearchConstraints(
            max_params=_parse.get_number(body, "max_params"),
            token_budget=_parse.get_number(body, "token_budget"),
            layer_range=_int_range(body.get("layers"), "layers"),
            hidden_range=_int_range(body.get("hidden"), "hidden"),
            ffn_range=_int_range(body.get("ffn"), "ffn"),
            gamma=_parse.get_number(body, "gamma", default=1.0),
            moe=_ratio_range(body["moe"]) if body.get("moe") is not None else None,
            vocab_size=_parse.get_count(body, "vocab_size") if "vocab_size" in body else 128_000,
        )
        top_k = _parse.get_count(body, "top_k") if "top_k" in body else 10
        hits = planner.search_architectures(constraints, weights, top_k=top_k)
        return {"hits": [h.to_json_dict() for h in hits]}

    def _expansion_plan(body: dict) -> planner.ExpansionPlan:
        return planner.ExpansionPlan(
            small=_parse.dense_arch(_parse.require_mapping(body.get("small"), "field 'small'")),
            small_tokens=_parse.get_number(body, "small_tokens"),
            large=_parse.dense_arch(_parse.require_mapping(body.get("large"), "field 'large'")),
            large_tokens=_parse.get_number(body, "large_tokens"),
            recovery_scale=_parse.get_number(body, "recovery_scale", default=0.1),
        )

    @endpoint("/v1/expand/predict")
    def expand_predict_endpoint(body: dict) -> dict:
        plan = _expansion_plan(body)
        result = planner.predict_expanded(plan, weights)
        return {"ratio": planner.expansion_ratio(plan), **result.to_json_dict()}

    @endpoint("/v1/expand/optimize")
    def expand_optimize_endpoint(body: dict) -> dict:
        small = _parse.dense_arch(_parse.require_mapping(body.get("small"), "field 'small'"))
        large = _parse.dense_arch(_parse.require_mapping(body.get("large"), "field 'large'"))
        total = _parse.get_number(body, "total_tokens")
        grid = _parse.get_count(body, "grid") if "grid" in body else 41
        curve = planner.expansion_split_curve(small, large, total, weights, grid=grid)
        best = planner.optimize_expansion_split(small, large, total, weights, grid=grid)
        return {
            "best": best.to_json_dict(),
            "curve": [
                {"small_tokens": t1, "large_tokens": t2, "score": s} for t1, t2, s in curve
            ],
        }

    @endpoint("/v1/fit")
    def fit_endpoint(body: dict) -> dict:
        raw_samples = body.get("samples")
        if not isinstance(raw_samples, list):
            raise RequestError("field 'samples' must be an array of sample objects")
        samples = []
        for entry in raw_samples:
            entry = _parse.require_mapping(entry, "sample")
            samples.append(
                calibration.build_sample(
                    _parse.arch_by_kind(entry),
                    _parse.training(entry),
                    observed=_parse.get_number(entry, "observed"),
                    weight=_parse.get_number(entry, "weight", default=1.0),
                )
            )
        return calibration.fit(samples).to_json_dict()

    @endpoint("/v1/gamma/infer")
    def gamma_infer_endpoint(body: dict) -> dict:
        arch = _parse.dense_arch(body)
        estimate = calibration.infer_gamma(
            arch, _parse.training(body), weights, _parse.get_number(body, "observed")
        )
        if not estimate.feasible:
            raise PerflawError(
                "observed score exceeds the gamma=0 prediction", code="INFEASIBLE_GAMMA"
            )
        return estimate.to_json_dict()

    @endpoint("/v1/contamination")
    def contamination_endpoint(body: dict) -> dict:
        predicted = _parse.get_number(body, "predicted")
        observed = _parse.get_number(body, "observed")
        threshold = _parse.get_number(body, "threshold", default=10.0)
        flag = calibration.contamination_check(predicted, observed, threshold)
        return {"flag": flag.value, "residual": observed - predicted}

    @app.get("/v1/zoo")
    def zoo_endpoint() -> JSONResponse:
        return _ok(
            {
                "count": len(records),
                "records": [rec.to_json_dict() for rec in records],
                "manifest": zoo.load_manifest() if dataset_path is None else None,
            }
        )

    @app.get("/v1/zoo/report")
    def zoo_report_endpoint() -> JSONResponse:
        return _ok(report.to_json_dict())

    @app.get("/v1/weights")
    def weights_endpoint() -> JSONResponse:
        return _ok({"weights": weights.to_json_dict()})

    @app.get("/healthz")
    def healthz() -> JSONResponse:
        return _ok({"status": "ok", "records": len(records)})

    return app


def serve(
    host: str = "127.0.0.1",
    port: int = 8000,
    dataset_path: str | None = None,
    weights: RegressionWeights = DEFAULT_WEIGHTS,
    cors_origins: tuple[str, ...] = (),
) -> None:
    """Run the service until interrupted."""
    import uvicorn

    app = create_app(dataset_path=dataset_path, weights=weights, cors_origins=cors_origins)
    uvicorn.run(app, host=host, port=port, log_level="info")
