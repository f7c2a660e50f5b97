"""Mapping → domain-object parsing shared by the CLI and the JSON service.

Structural problems (missing keys, wrong types) raise RequestError;
domain violations surface from the constructors as DomainError. The field
vocabulary matches the CLI flags and the dataset columns: layers, hidden,
ffn, expert_ffn, tokens, size, act, gamma.
"""

from __future__ import annotations

import json

from .core import DenseArch, MoeArch, RegressionWeights, TrainingSpec
from .errors import RequestError, UnsupportedWeightsError

WEIGHT_KEYS = ("w1", "w2", "w3", "w4", "b")


def require_mapping(value, what: str) -> dict:
    if not isinstance(value, dict):
        raise RequestError(f"{what} must be a JSON object")
    return value


def get_number(mapping: dict, key: str, *, default=None) -> float:
    if key not in mapping:
        if default is not None:
            return default
        raise RequestError(f"missing required field {key!r}")
    value = mapping[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise RequestError(f"field {key!r} must be a number")
    return float(value)


def get_count(mapping: dict, key: str) -> int:
    value = get_number(mapping, key)
    if value != int(value):
        raise RequestError(f"field {key!r} must be an integer")
    return int(value)


def dense_arch(mapping: dict) -> DenseArch:
    """Build a DenseArch from {layers, hidden, ffn, size[, gamma]}."""
    return DenseArch(
        n_layers=get_count(mapping, "layers"),
        hidden_size=get_count(mapping, "hidden"),
        ffn_size=get_count(mapping, "ffn"),
        param_count=get_number(mapping, "size"),
        gamma=get_number(mapping, "gamma", default=1.0),
    )


def moe_arch(mapping: dict) -> MoeArch:
    """Build a MoeArch from {layers, hidden, ffn, expert_ffn, size, act[, gamma]}."""
    return MoeArch(
        n_layers=get_count(mapping, "layers"),
        hidden_size=get_count(mapping, "hidden"),
        ffn_size=get_count(mapping, "ffn"),
        total_params=get_number(mapping, "size"),
        active_params=get_number(mapping, "act"),
        expert_ffn_size=get_count(mapping, "expert_ffn"),
        gamma=get_number(mapping, "gamma", default=1.0),
    )


def arch_by_kind(mapping: dict) -> DenseArch | MoeArch:
    """Dispatch on the 'kind' field ('dense' is assumed when absent)."""
    kind = mapping.get("kind", "dense")
    if kind == "dense":
        return dense_arch(mapping)
    if kind == "moe":
        return moe_arch(mapping)
    raise RequestError(f"field 'kind' must be 'dense' or 'moe', got {kind!r}")


def training(mapping: dict) -> TrainingSpec:
    return TrainingSpec(get_number(mapping, "tokens"))


def weights_from_mapping(mapping: dict) -> RegressionWeights:
    """Accept either the bare coefficients {w1..w4, b} or {"weights": {...}}."""
    mapping = require_mapping(mapping, "weights")
    if "weights" in mapping:
        mapping = require_mapping(mapping["weights"], "weights")
    missing = [k for k in WEIGHT_KEYS if k not in mapping]
    if missing:
        raise UnsupportedWeightsError(f"weights object is missing {', '.join(missing)}")
    return RegressionWeights(**{k: get_number(mapping, k) for k in WEIGHT_KEYS})


def weights_from_file(path: str) -> RegressionWeights:
    try:
        with open(path, encoding="utf-8") as f:
            payload = json.load(f)
    except OSError as e:
        raise UnsupportedWeightsError(f"cannot read weights file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise UnsupportedWeightsError(f"weights file {path} is not valid JSON: {e}") from e
    return weights_from_mapping(payload)
