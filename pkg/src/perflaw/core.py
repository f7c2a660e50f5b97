"""Closed-form MMLU score prediction from transformer shape and data size.

The predicted score is a log-linear function of four quantities: layer
count, hidden width, FFN width, and effective training tokens, each damped
by a multiplicative "unstable discount" that models training instability
of deep or slim models under imperfect numerics.

Unit conventions (deliberately asymmetric, kept everywhere in this
package): token counts are in TRILLIONS, parameter counts are in
BILLIONS, and the saturation clip ``min(tokens, capacity)`` compares the
two as plain numbers. A 7 B-parameter model therefore saturates at a
nominal 7 (trillion tokens). All logarithms are natural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "DenseArch",
    "MoeArch",
    "TrainingSpec",
    "RegressionWeights",
    "PredictionResult",
    "DEFAULT_WEIGHTS",
    "effective_tokens",
    "unstable_discount",
    "moe_expansion_factor",
    "adjust_high_score",
    "mmlu_to_mmlu_pro",
    "estimate_param_count",
    "log_features",
    "score_from_features",
    "predict_dense",
    "predict_moe",
    "predict",
]


@dataclass(frozen=True)
class DenseArch:
    """Shape of a dense transformer.

    Attributes:
        n_layers: Number of transformer layers.
        hidden_size: Model (hidden) width.
        ffn_size: FFN intermediate width.
        param_count: Total parameters in billions.
        gamma: Precision coefficient of the training setup. 1.0 means a
            well-behaved stack; larger values mean worse numerics and a
            heavier instability discount. Must be >= 0.
    """

    n_layers: int
    hidden_size: int
    ffn_size: int
    param_count: float
    gamma: float = 1.0

    def __post_init__(self):
        if self.n_layers < 1:
            raise DomainError("n_layers must be >= 1", code="DOMAIN_NONPOSITIVE")
        if self.hidden_size < 1:
            raise DomainError("hidden_size must be >= 1", code="DOMAIN_NONPOSITIVE")
        if self.ffn_size < 1:
            raise DomainError("ffn_size must be >= 1", code="DOMAIN_NONPOSITIVE")
        if not self.param_count > 0:
            raise DomainError("param_count must be positive", code="DOMAIN_NONPOSITIVE")
        if self.gamma < 0:
            raise DomainError("gamma must be >= 0", code="DOMAIN_NONPOSITIVE")


@dataclass(frozen=True)
class MoeArch:
    """Shape of a mixture-of-experts transformer.

    ``ffn_size`` is the dense (compressed) FFN width entering the score,
    while ``expert_ffn_size`` is the largest FFN width among activated
    experts and drives the instability discount. The two coincide for
    coarse-grained MoEs; fine-grained designs have expert_ffn_size much
    larger than ffn_size.
    """

    n_layers: int
    hidden_size: int
    ffn_size: int
    total_params: float
    active_params: float
    expert_ffn_size: int
    gamma: float = 1.0

    def __post_init__(self):
        if self.n_layers < 1:
            raise DomainError("n_layers must be >= 1", code="DOMAIN_NONPOSITIVE")
        if self.hidden_size < 1:
            raise DomainError("hidden_size must be >= 1", code="DOMAIN_NONPOSITIVE")
        if self.ffn_size < 1:
            raise DomainError("ffn_size must be >= 1", code="DOMAIN_NONPOSITIVE")
        if self.expert_ffn_size < 1:
            raise DomainError("expert_ffn_size must be >= 1", code="DOMAIN_NONPOSITIVE")
        if not self.active_params > 0:
            raise DomainError("active_params must be positive", code="DOMAIN_NONPOSITIVE")
        if self.active_params > self.total_params:
            raise DomainError(
                "active_params must not exceed total_params", code="DOMAIN_NONPOSITIVE"
            )
        if self.gamma < 0:
            raise DomainError("gamma must be >= 0", code="DOMAIN_NONPOSITIVE")

    @property
    def param_count(self) -> float:
        """Total parameters in billions, for symmetry with DenseArch."""
        return self.total_params


@dataclass(frozen=True)
class TrainingSpec:
    """Training data size in trillions of tokens."""

    tokens: float

    def __post_init__(self):
        if not self.tokens > 0:
            raise DomainError("tokens must be positive", code="DOMAIN_NONPOSITIVE")


@dataclass(frozen=True)
class RegressionWeights:
    """Coefficients of the log-linear score. Defaults are the published fit."""

    w1: float = 13.95018
    w2: float = 0.23072
    w3: float = -0.48523
    w4: float = 5.39802
    b: float = 9.19541

    def coeffs(self) -> np.ndarray:
        """The four slope coefficients as an array (intercept excluded)."""
        return np.array([self.w1, self.w2, self.w3, self.w4])

    def to_json_dict(self) -> dict:
        return {"w1": self.w1, "w2": self.w2, "w3": self.w3, "w4": self.w4, "b": self.b}


DEFAULT_WEIGHTS = RegressionWeights()


@dataclass(frozen=True)
class PredictionResult:
    """A score prediction together with its intermediates.

    ``adjusted_score`` equals ``raw_score`` up to 90 and is squashed below
    100 above that. ``expansion_factor`` is None for dense predictions.
    """

    raw_score: float
    adjusted_score: float
    effective_tokens: float
    discount: float
    token_clipped: bool
    expansion_factor: float | None = None

    def to_json_dict(self) -> dict:
        return {
            "raw": self.raw_score,
            "adjusted": self.adjusted_score,
            "effective_tokens": self.effective_tokens,
            "discount": self.discount,
            "token_clipped": self.token_clipped,
            "expansion_factor": self.expansion_factor,
        }


def effective_tokens(tokens: float, capacity: float) -> float:
    """Clip training tokens at the model's saturation capacity.

    ``tokens`` is in trillions, ``capacity`` in billions of parameters
    (the total count for dense models, sqrt(active * total) for MoEs);
    the comparison is numeric, with no unit conversion.
    """
    if not tokens > 0:
        raise DomainError("tokens must be positive", code="DOMAIN_NONPOSITIVE")
    if not capacity > 0:
        raise DomainError("capacity must be positive", code="DOMAIN_NONPOSITIVE")
    return min(tokens, capacity)


def _discount(n_layers: float, hidden: float, ffn: float, gamma: float) -> float:
    z = (10.0 / ffn + 20.0 / hidden) * (gamma * n_layers)
    return math.exp(-(z**2))


def unstable_discount(arch: DenseArch) -> float:
    """Instability discount exp(-[(10/ffn + 20/hidden) * gamma * layers]^2).

    Always in (0, 1]; equal to 1 when gamma is 0; decreasing in depth and
    gamma, increasing in either width.
    """
    return _discount(arch.n_layers, arch.hidden_size, arch.ffn_size, arch.gamma)


def moe_expansion_factor(moe: MoeArch) -> float:
    """Multiplier g applied to depth and hidden width of an MoE.

    Scales the sparse model so it scores like a dense model of
    sqrt(active * total) parameters: a cube-root "side length" expansion
    of the activated parameters, adjusted by the relative activation
    ratio and gated by the absolute activation size.
    """
    act, total = moe.active_params, moe.total_params
    side = (math.sqrt(act * total) / act) ** (1.0 / 3.0)
    scale = (1.0 + math.sqrt(4.0 * act / total)) / 2.0
    gate = 1.0 / (1.0 + math.exp(-act / 4.0))
    return side * scale * gate


def adjust_high_score(raw: float) -> float:
    """Squash scores above 90 to stay below the 100-point ceiling.

    Identity at or below 90, continuous at 90, strictly below 100.
    """
    if raw <= 90.0:
        return raw
    return 90.0 + 10.0 * math.tanh(0.1 * raw - 9.0)


def mmlu_to_mmlu_pro(mmlu: float) -> float:
    """Map an MMLU score to an approximate MMLU-Pro score (2.33 * x - 133).

    The linear map is calibrated on strong models only; inputs at or
    below 70 are rejected rather than extrapolated.
    """
    if not mmlu > 70.0:
        raise DomainError(
            "MMLU-Pro mapping is only calibrated for MMLU > 70", code="OUT_OF_SCOPE"
        )
    return 2.33 * mmlu - 133.0


def estimate_param_count(
    n_layers: int, hidden_size: int, ffn_size: int, vocab_size: int = 128_000
) -> float:
    """Rough parameter count in billions for a dense transformer shape.

    Counts attention as 4*h^2, a gated FFN as 3*h*d, and untied
    input/output embeddings as 2*V*h. This is an approximation for
    planning; a known true count should always be preferred.
    """
    if n_layers < 1 or hidden_size < 1 or ffn_size < 1:
        raise DomainError("dimensions must be >= 1", code="DOMAIN_NONPOSITIVE")
    if vocab_size < 0:
        raise DomainError("vocab_size must be >= 0", code="DOMAIN_NONPOSITIVE")
    h, d = hidden_size, ffn_size
    return (n_layers * (4 * h * h + 3 * h * d) + 2 * vocab_size * h) / 1e9


def _log_args(
    discount: float, n_layers: float, hidden: float, ffn: float, tokens: float
) -> np.ndarray:
    args = discount * np.array([n_layers, hidden, ffn, tokens], dtype=float)
    if discount <= 0.0 or not np.all(np.isfinite(args)) or np.any(args <= 0.0):
        raise DomainError(
            "log argument is not positive and finite (discount underflow or bad dims)",
            code="DOMAIN_NEGATIVE_LOG",
        )
    return np.log(args)


def score_from_features(features: np.ndarray, weights: RegressionWeights) -> float:
    """Dot the four log-features with the slope coefficients and add the intercept."""
    return float(np.sum(weights.coeffs() * features) + weights.b)


def _dense_parts(arch: DenseArch, train: TrainingSpec):
    eff = effective_tokens(train.tokens, arch.param_count)
    u = unstable_discount(arch)
    feats = _log_args(u, arch.n_layers, arch.hidden_size, arch.ffn_size, eff)
    return feats, u, eff, arch.param_count < train.tokens


def _moe_parts(moe: MoeArch, train: TrainingSpec):
    g = moe_expansion_factor(moe)
    n_g = moe.n_layers * g
    h_g = moe.hidden_size * g
    capacity = math.sqrt(moe.active_params * moe.total_params)
    eff = effective_tokens(train.tokens, capacity)
    # The discount sees the expanded depth/width and the expert FFN width;
    # the score's FFN term keeps the dense (compressed) width.
    u = _discount(n_g, h_g, moe.expert_ffn_size, moe.gamma)
    feats = _log_args(u, n_g, h_g, moe.ffn_size, eff)
    return feats, u, eff, capacity < train.tokens, g


def log_features(arch: DenseArch | MoeArch, train: TrainingSpec) -> np.ndarray:
    """The four log-arguments of the score, exactly as prediction computes them."""
    if isinstance(arch, MoeArch):
        return _moe_parts(arch, train)[0]
    return _dense_parts(arch, train)[0]


def predict_dense(
    arch: DenseArch, train: TrainingSpec, weights: RegressionWeights = DEFAULT_WEIGHTS
) -> PredictionResult:
    """Predict the MMLU score of a dense model."""
    if not isinstance(arch, DenseArch):
        raise DomainError("predict_dense requires a DenseArch", code="DOMAIN_ERROR")
    feats, u, eff, clipped = _dense_parts(arch, train)
    raw = score_from_features(feats, weights)
    return PredictionResult(raw, adjust_high_score(raw), eff, u, clipped)


def predict_moe(
    moe: MoeArch, train: TrainingSpec, weights: RegressionWeights = DEFAULT_WEIGHTS
) -> PredictionResult:
    """Predict the MMLU score of a mixture-of-experts model."""
    if not isinstance(moe, MoeArch):
        raise DomainError("predict_moe requires a MoeArch", code="DOMAIN_ERROR")
    feats, u, eff, clipped, g = _moe_parts(moe, train)
    raw = score_from_features(feats, weights)
    return PredictionResult(raw, adjust_high_score(raw), eff, u, clipped, g)


def predict(
    arch: DenseArch | MoeArch,
    train: TrainingSpec,
    weights: RegressionWeights = DEFAULT_WEIGHTS,
) -> PredictionResult:
    """Dispatch to the dense or MoE prediction based on the architecture type."""
    if isinstance(arch, MoeArch):
        return predict_moe(arch, train, weights)
    return predict_dense(arch, train, weights)
