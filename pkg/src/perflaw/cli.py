"""Command-line interface.

Subcommands mirror the library: predict, zoo, fit, gamma, sweep, search,
expand, serve. Human-facing "table" output rounds to 2 decimals; csv and
json output never round (floats are printed with full round-trip
precision). Exit codes: 0 success, 1 computation/domain error, 2 usage.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys

from . import _parse, calibration, planner, zoo
from .core import DEFAULT_WEIGHTS, RegressionWeights, TrainingSpec, predict
from .errors import PerflawError, RequestError

WEIGHTS_ENV_VAR = "PERFLAW_WEIGHTS"

log = logging.getLogger("perflaw.cli")


def _parse_range(text: str, *, name: str) -> planner.IntRange:
    """LO:HI or LO:HI:STEP with integer parts."""
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise RequestError(f"--{name} expects LO:HI or LO:HI:STEP, got {text!r}")
    try:
        numbers = [int(p) for p in parts]
    except ValueError:
        raise RequestError(f"--{name} parts must be integers, got {text!r}") from None
    return planner.IntRange(*numbers)


def _parse_ratio_range(text: str) -> planner.RatioRange:
    parts = text.split(":")
    if len(parts) != 3:
        raise RequestError(f"--moe-ratio expects LO:HI:STEPS, got {text!r}")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise RequestError("--moe-ratio parts must be LO:HI floats and STEPS int") from None
    return planner.RatioRange(lo, hi, steps)


def _parse_span(text: str, *, name: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise RequestError(f"--{name} expects LO:HI, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise RequestError(f"--{name} parts must be numbers, got {text!r}") from None


def _resolve_weights(args) -> RegressionWeights:
    path = getattr(args, "weights", None) or os.environ.get(WEIGHTS_ENV_VAR)
    if not path:
        return DEFAULT_WEIGHTS
    log.info("loading regression weights from %s", path)
    return _parse.weights_from_file(path)


def _arch_from_args(args, *, kind: str | None = None):
    kind = kind or getattr(args, "kind", "dense")
    mapping = {
        "layers": args.layers,
        "hidden": args.hidden,
        "ffn": args.ffn,
        "size": args.size,
        "gamma": args.gamma,
    }
    if kind == "moe":
        mapping["expert_ffn"] = args.expert_ffn
        mapping["act"] = args.act
        mapping = {k: v for k, v in mapping.items() if v is not None}
        return _parse.moe_arch(mapping)
    return _parse.dense_arch(mapping)


def _dense_quad(text: str, *, name: str, gamma: float):
    parts = text.split(",")
    if len(parts) != 4:
        raise RequestError(f"--{name} expects LAYERS,HIDDEN,FFN,SIZE_B, got {text!r}")
    try:
        n, h, d = (int(p) for p in parts[:3])
        s = float(parts[3])
    except ValueError:
        raise RequestError(f"--{name} parts must be numbers, got {text!r}") from None
    return _parse.dense_arch({"layers": n, "hidden": h, "ffn": d, "size": s, "gamma": gamma})


def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return value


def _emit_csv(header: list[str], rows: list[list], stream=None) -> None:
    writer = csv.writer(stream or sys.stdout)
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_cell(v) for v in row])


def _emit_json(payload) -> None:
    json.dump(payload, sys.stdout)
    sys.stdout.write("\n")


# ---------------------------------------------------------------- predict

def _cmd_predict(args) -> int:
    weights = _resolve_weights(args)
    arch = _arch_from_args(args, kind=args.arch_kind)
    result = predict(arch, TrainingSpec(args.tokens), weights)
    if args.format == "json":
        _emit_json(result.to_json_dict())
    elif args.format == "csv":
        d = result.to_json_dict()
        _emit_csv(list(d.keys()), [list(d.values())])
    else:
        print(f"{result.adjusted_score:.9f}")
    return 0


# ------------------------------------------------------------------- zoo

def _cmd_zoo_eval(args) -> int:
    weights = _resolve_weights(args)
    report = zoo.evaluate_zoo(zoo.load_zoo(args.data), weights)
    if args.format == "json":
        _emit_json(report.to_json_dict())
    elif args.format == "csv":
        _emit_csv(
            ["name", "predicted", "reported", "diff", "tags"],
            [[r.name, r.predicted, r.reported, r.diff, "|".join(r.tags)] for r in report.rows],
        )
    else:
        print(f"{'model':24s} {'pred':>7s} {'mmlu':>6s} {'diff':>7s}  tags")
        for r in report.rows:
            print(
                f"{r.name:24s} {r.predicted:7.2f} {r.reported:6.1f} {r.diff:+7.2f}  "
                f"{'|'.join(r.tags)}"
            )
        r = "n/a" if report.pearson_r is None else f"{report.pearson_r:.3f}"
        print(f"\nn={len(report.rows)}  MAE={report.mae:.2f}  pearson_r={r}")
        sub = report.subsets.get("english-ex-llama1")
        if sub:
            sub_r = "n/a" if sub["pearson_r"] is None else f"{sub['pearson_r']:.3f}"
            print(
                f"english-ex-llama1: n={sub['n']}  MAE={sub['mae']:.2f}  pearson_r={sub_r}"
            )
    return 0


def _cmd_zoo_scatter(args) -> int:
    weights = _resolve_weights(args)
    report = zoo.evaluate_zoo(zoo.load_zoo(args.data), weights)
    count = zoo.export_scatter(report, args.out, subset=args.subset)
    print(f"wrote {count} points to {args.out}")
    return 0


# ------------------------------------------------------------------- fit

def _cmd_fit(args) -> int:
    try:
        with open(args.samples, encoding="utf-8") as f:
            payload = json.load(f)
    except OSError as e:
        raise RequestError(f"cannot read samples file {args.samples}: {e}") from e
    except json.JSONDecodeError as e:
        raise RequestError(f"samples file {args.samples} is not valid JSON: {e}") from e
    if not isinstance(payload, list):
        raise RequestError("samples file must hold a JSON array of sample objects")
    samples = []
    for entry in payload:
        entry = _parse.require_mapping(entry, "sample")
        samples.append(
            calibration.build_sample(
                _parse.arch_by_kind(entry),
                _parse.training(entry),
                observed=_parse.get_number(entry, "observed"),
                weight=_parse.get_number(entry, "weight", default=1.0),
            )
        )
    report = calibration.fit(samples)
    if args.format == "json":
        _emit_json(report.to_json_dict())
    elif args.format == "csv":
        rows = [[k, v] for k, v in report.weights.to_json_dict().items()]
        rows += [["mae", report.mae], ["pearson_r", report.pearson_r]]
        _emit_csv(["name", "value"], rows)
    else:
        for key, value in report.weights.to_json_dict().items():
            print(f"{key} = {value:.6f}")
        print(f"n={len(samples)}  MAE={report.mae:.4f}  pearson_r={report.pearson_r:.4f}")
    return 0


# ----------------------------------------------------------------- gamma

def _cmd_gamma_infer(args) -> int:
    weights = _resolve_weights(args)
    arch = _parse.dense_arch(
        {"layers": args.layers, "hidden": args.hidden, "ffn": args.ffn, "size": args.size}
    )
    estimate = calibration.infer_gamma(arch, TrainingSpec(args.tokens), weights, args.observed)
    if args.format == "json":
        _emit_json(estimate.to_json_dict())
    elif args.format == "csv":
        _emit_csv(["gamma", "feasible"], [[estimate.gamma, estimate.feasible]])
    elif estimate.feasible:
        print(f"gamma = {estimate.gamma:.9f}")
    else:
        print("infeasible: observed score exceeds the gamma=0 prediction")
    return 0


# ----------------------------------------------------------------- sweep

def _cmd_sweep(args) -> int:
    weights = _resolve_weights(args)
    lo, hi = _parse_span(args.range, name="range")
    spec = planner.SweepSpec(
        variable=args.variable,
        lo=lo,
        hi=hi,
        steps=args.steps,
        arch=_arch_from_args(args),
        train=TrainingSpec(args.tokens),
    )
    points = planner.sweep(spec, weights)
    if args.format == "json":
        _emit_json(
            {"variable": args.variable, "points": [{"x": x, "score": s} for x, s in points]}
        )
    elif args.format == "csv":
        _emit_csv([args.variable, "score"], [[x, s] for x, s in points])
    else:
        for x, s in points:
            print(f"{x:12.4f} {s:8.2f}")
    return 0


# ---------------------------------------------------------------- search

def _cmd_search(args) -> int:
    weights = _resolve_weights(args)
    constraints = planner.SearchConstraints(
        max_params=args.max_params,
        token_budget=args.tokens,
        layer_range=_parse_range(args.layers, name="layers"),
        hidden_range=_parse_range(args.hidden, name="hidden"),
        ffn_range=_parse_range(args.ffn, name="ffn"),
        gamma=args.gamma,
        moe=_parse_ratio_range(args.moe_ratio) if args.moe_ratio else None,
        vocab_size=args.vocab,
    )
    hits = planner.search_architectures(constraints, weights, top_k=args.top_k)
    if args.format == "json":
        _emit_json({"hits": [h.to_json_dict() for h in hits]})
        return 0
    if args.format == "csv":
        rows = []
        for h in hits:
            a = h.to_json_dict()["arch"]
            rows.append(
                [a["kind"], a["layers"], a["hidden"], a["ffn"], a.get("expert_ffn", ""),
                 a["size_B"], a.get("act_B", ""), h.est_params, h.score]
            )
        _emit_csv(
            ["kind", "layers", "hidden", "ffn", "expert_ffn", "size_B", "act_B",
             "est_params", "score"],
            rows,
        )
        return 0
    if not hits:
        print("no feasible architecture within the parameter budget")
        return 0
    print(f"{'#':>2s} {'kind':5s} {'layers':>6s} {'hidden':>6s} {'ffn':>6s} "
          f"{'est_B':>8s} {'score':>7s}")
    for rank, h in enumerate(hits, start=1):
        kind = h.to_json_dict()["arch"]["kind"]
        print(
            f"{rank:2d} {kind:5s} "
            f"{h.arch.n_layers:6d} {h.arch.hidden_size:6d} {h.arch.ffn_size:6d} "
            f"{h.est_params:8.3f} {h.score:7.2f}"
        )
    return 0


# ---------------------------------------------------------------- expand

def _cmd_expand_predict(args) -> int:
    weights = _resolve_weights(args)
    plan = planner.ExpansionPlan(
        small=_dense_quad(args.small, name="small", gamma=args.gamma),
        small_tokens=args.small_tokens,
        large=_dense_quad(args.large, name="large", gamma=args.gamma),
        large_tokens=args.large_tokens,
    )
    result = planner.predict_expanded(plan, weights)
    if args.format == "json":
        _emit_json({"ratio": planner.expansion_ratio(plan), **result.to_json_dict()})
    elif args.format == "csv":
        d = {"ratio": planner.expansion_ratio(plan), **result.to_json_dict()}
        _emit_csv(list(d.keys()), [list(d.values())])
    else:
        print(f"{result.adjusted_score:.9f}")
    return 0


def _cmd_expand_optimize(args) -> int:
    weights = _resolve_weights(args)
    small = _dense_quad(args.small, name="small", gamma=args.gamma)
    large = _dense_quad(args.large, name="large", gamma=args.gamma)
    curve = planner.expansion_split_curve(small, large, args.total, weights, grid=args.grid)
    best = planner.optimize_expansion_split(small, large, args.total, weights, grid=args.grid)
    if args.format == "json":
        _emit_json(
            {
                "best": best.to_json_dict(),
                "curve": [{"small_tokens": t1, "large_tokens": t2, "score": s}
                          for t1, t2, s in curve],
            }
        )
    elif args.format == "csv":
        _emit_csv(["small_tokens", "large_tokens", "score"], [list(p) for p in curve])
    else:
        print(
            f"best split: expand after {best.small_tokens:.3f}T "
            f"(then {best.large_tokens:.3f}T more) -> {best.score:.2f}"
        )
    return 0


# ----------------------------------------------------------------- serve

def _cmd_serve(args) -> int:
    from . import service

    service.serve(
        host=args.host,
        port=args.port,
        dataset_path=args.data,
        weights=_resolve_weights(args),
        cors_origins=tuple(args.cors or ()),
    )
    return 0


# ---------------------------------------------------------------- parser

def _add_format(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("table", "csv", "json"), default="table",
                   help="output format (default: table)")


def _add_weights(p: argparse.ArgumentParser) -> None:
    p.add_argument("--weights", metavar="FILE",
                   help=f"JSON file with regression weights "
                        f"(overrides ${WEIGHTS_ENV_VAR}; defaults built in)")


def _add_dense_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--layers", type=int, required=True, help="transformer layer count N")
    p.add_argument("--hidden", type=int, required=True, help="hidden width h")
    p.add_argument("--ffn", type=int, required=True, help="FFN width d")
    p.add_argument("--size", type=float, required=True, help="total parameters in billions S")
    p.add_argument("--gamma", type=float, default=1.0,
                   help="precision coefficient (default 1.0)")


def _add_moe_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--expert-ffn", dest="expert_ffn", type=int, required=True,
                   help="max activated-expert FFN width d'")
    p.add_argument("--act", type=float, required=True,
                   help="activated parameters in billions A")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="perflaw",
        description="Closed-form LLM benchmark score prediction and planning.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="increase log verbosity (-v, -vv)")
    sub = parser.add_subparsers(dest="command", required=True)

    # predict
    predict_p = sub.add_parser("predict", help="predict the score of one configuration")
    kinds = predict_p.add_subparsers(dest="arch_kind", required=True)
    for kind in ("dense", "moe"):
        kp = kinds.add_parser(kind, help=f"{kind} architecture")
        _add_dense_flags(kp)
        if kind == "moe":
            _add_moe_flags(kp)
        kp.add_argument("--tokens", type=float, required=True,
                        help="training tokens in trillions T")
        _add_weights(kp)
        _add_format(kp)
        kp.set_defaults(func=_cmd_predict)

    # zoo
    zoo_p = sub.add_parser("zoo", help="evaluate or export the bundled model table")
    zoo_sub = zoo_p.add_subparsers(dest="zoo_command", required=True)
    eval_p = zoo_sub.add_parser("eval", help="predict every model and summarize accuracy")
    eval_p.add_argument("--data", metavar="CSV", help="dataset path (default: bundled)")
    _add_weights(eval_p)
    _add_format(eval_p)
    eval_p.set_defaults(func=_cmd_zoo_eval)
    scatter_p = zoo_sub.add_parser("scatter", help="export a predicted/reported scatter CSV")
    scatter_p.add_argument("--out", required=True, metavar="FILE", help="output CSV path")
    scatter_p.add_argument("--subset", default="all", choices=sorted(zoo.SUBSETS),
                           help="row filter (default: all)")
    scatter_p.add_argument("--data", metavar="CSV", help="dataset path (default: bundled)")
    _add_weights(scatter_p)
    scatter_p.set_defaults(func=_cmd_zoo_scatter)

    # fit
    fit_p = sub.add_parser("fit", help="fit regression weights from observed scores")
    fit_p.add_argument("--samples", required=True, metavar="JSON",
                       help="JSON array of {kind?, layers, hidden, ffn, size, act?, "
                            "expert_ffn?, tokens, observed, weight?}")
    _add_format(fit_p)
    fit_p.set_defaults(func=_cmd_fit)

    # gamma
    gamma_p = sub.add_parser("gamma", help="inverse problems for the precision coefficient")
    gamma_sub = gamma_p.add_subparsers(dest="gamma_command", required=True)
    infer_p = gamma_sub.add_parser("infer", help="recover gamma from an observed score")
    infer_p.add_argument("--layers", type=int, required=True)
    infer_p.add_argument("--hidden", type=int, required=True)
    infer_p.add_argument("--ffn", type=int, required=True)
    infer_p.add_argument("--size", type=float, required=True)
    infer_p.add_argument("--tokens", type=float, required=True)
    infer_p.add_argument("--observed", type=float, required=True,
                         help="observed benchmark score")
    _add_weights(infer_p)
    _add_format(infer_p)
    infer_p.set_defaults(func=_cmd_gamma_infer)

    # sweep
    sweep_p = sub.add_parser("sweep", help="score a config across one varying quantity")
    sweep_p.add_argument("--variable", required=True, choices=planner.SWEEP_VARIABLES)
    sweep_p.add_argument("--range", required=True, metavar="LO:HI")
    sweep_p.add_argument("--steps", type=int, required=True)
    sweep_p.add_argument("--kind", choices=("dense", "moe"), default="dense")
    _add_dense_flags(sweep_p)
    sweep_p.add_argument("--expert-ffn", dest="expert_ffn", type=int,
                         help="max activated-expert FFN width d' (moe only)")
    sweep_p.add_argument("--act", type=float, help="activated parameters in billions (moe only)")
    sweep_p.add_argument("--tokens", type=float, required=True,
                         help="training tokens in trillions T")
    _add_weights(sweep_p)
    _add_format(sweep_p)
    sweep_p.set_defaults(func=_cmd_sweep)

    # search
    search_p = sub.add_parser("search", help="grid-search architectures under a budget")
    search_p.add_argument("--max-params", dest="max_params", type=float, required=True,
                          help="parameter budget in billions")
    search_p.add_argument("--tokens", type=float, required=True,
                          help="token budget in trillions")
    search_p.add_argument("--layers", required=True, metavar="LO:HI[:STEP]")
    search_p.add_argument("--hidden", required=True, metavar="LO:HI[:STEP]")
    search_p.add_argument("--ffn", required=True, metavar="LO:HI[:STEP]")
    search_p.add_argument("--gamma", type=float, default=1.0)
    search_p.add_argument("--moe-ratio", dest="moe_ratio", metavar="LO:HI:STEPS",
                          help="also try MoE variants over this activation-ratio range")
    search_p.add_argument("--vocab", type=int, default=128_000,
                          help="vocab size for the parameter estimate (default 128000)")
    search_p.add_argument("--top-k", dest="top_k", type=int, default=10)
    _add_weights(search_p)
    _add_format(search_p)
    search_p.set_defaults(func=_cmd_search)

    # expand
    expand_p = sub.add_parser("expand", help="model-expansion planning")
    expand_sub = expand_p.add_subparsers(dest="expand_command", required=True)
    ep = expand_sub.add_parser("predict", help="score a small->large expansion plan")
    ep.add_argument("--small", required=True, metavar="N,H,D,S")
    ep.add_argument("--small-tokens", dest="small_tokens", type=float, required=True)
    ep.add_argument("--large", required=True, metavar="N,H,D,S")
    ep.add_argument("--large-tokens", dest="large_tokens", type=float, required=True)
    ep.add_argument("--gamma", type=float, default=1.0)
    _add_weights(ep)
    _add_format(ep)
    ep.set_defaults(func=_cmd_expand_predict)
    eo = expand_sub.add_parser("optimize", help="find the best expansion point")
    eo.add_argument("--small", required=True, metavar="N,H,D,S")
    eo.add_argument("--large", required=True, metavar="N,H,D,S")
    eo.add_argument("--total", type=float, required=True,
                    help="total token budget in trillions")
    eo.add_argument("--grid", type=int, default=41, help="number of splits (default 41)")
    eo.add_argument("--gamma", type=float, default=1.0)
    _add_weights(eo)
    _add_format(eo)
    eo.set_defaults(func=_cmd_expand_optimize)

    # serve
    serve_p = sub.add_parser("serve", help="run the JSON HTTP service")
    serve_p.add_argument("--host", default="127.0.0.1")
    serve_p.add_argument("--port", type=int, default=8000)
    serve_p.add_argument("--data", metavar="CSV", help="dataset path (default: bundled)")
    serve_p.add_argument("--cors", action="append", metavar="ORIGIN",
                         help="allow this CORS origin (repeatable)")
    _add_weights(serve_p)
    serve_p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except PerflawError as e:
        print(f"error [{e.code}]: {e}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
