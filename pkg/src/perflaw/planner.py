"""Decision support: sweeps, architecture search, and expansion planning.

Everything here is a thin orchestration over the closed-form prediction,
so exhaustive grids are cheap: a point costs microseconds, and the
default search spaces stay well under a million evaluations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .core import (
    DEFAULT_WEIGHTS,
    DenseArch,
    MoeArch,
    PredictionResult,
    RegressionWeights,
    TrainingSpec,
    _discount,
    _log_args,
    adjust_high_score,
    estimate_param_count,
    predict,
    predict_moe,
    score_from_features,
)
from .errors import DomainError

__all__ = [
    "SweepSpec",
    "IntRange",
    "RatioRange",
    "SearchConstraints",
    "SearchHit",
    "ExpansionPlan",
    "SplitResult",
    "GIANT_MOE_ARCH",
    "GIANT_MOE_TRAINING",
    "sweep",
    "giant_projection",
    "search_architectures",
    "expansion_ratio",
    "predict_expanded",
    "expansion_split_curve",
    "optimize_expansion_split",
]

SWEEP_VARIABLES = ("gamma", "tokens", "n_layers")


@dataclass(frozen=True)
class SweepSpec:
    """A one-dimensional sweep of gamma, tokens, or n_layers around a base config."""

    variable: str
    lo: float
    hi: float
    steps: int
    arch: DenseArch | MoeArch
    train: TrainingSpec

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise DomainError(
                f"sweep variable must be one of {', '.join(SWEEP_VARIABLES)}; "
                f"got {self.variable!r}",
                code="DOMAIN_ERROR",
            )
        if not self.lo < self.hi:
            raise DomainError("sweep range needs lo < hi", code="DOMAIN_ERROR")
        if self.steps < 2:
            raise DomainError("sweep needs at least 2 steps", code="DOMAIN_ERROR")
        floor = {"gamma": 0.0, "tokens": 0.0, "n_layers": 1.0}[self.variable]
        if self.variable == "tokens" and not self.lo > floor:
            raise DomainError("tokens sweep needs lo > 0", code="DOMAIN_NONPOSITIVE")
        if self.variable != "tokens" and self.lo < floor:
            raise DomainError(
                f"{self.variable} sweep needs lo >= {floor:g}", code="DOMAIN_NONPOSITIVE"
            )


def sweep(spec: SweepSpec, weights: RegressionWeights = DEFAULT_WEIGHTS) -> list[tuple[float, float]]:
    """Evaluate the adjusted score at evenly spaced values of one variable.

    Returns (x, adjusted_score) pairs. Layer counts are rounded to the
    nearest integer and the rounded value is reported as x.
    """
    points = []
    for x in np.linspace(spec.lo, spec.hi, spec.steps):
        x = float(x)
        arch, train = spec.arch, spec.train
        if spec.variable == "gamma":
            arch = replace(arch, gamma=x)
        elif spec.variable == "tokens":
            train = TrainingSpec(x)
        else:
            x = float(int(round(x)))
            arch = replace(arch, n_layers=int(x))
        points.append((x, predict(arch, train, weights).adjusted_score))
    return points


# Projection preset: a deliberately extreme MoE trained on 100T tokens under
# degraded precision (gamma 1.9), far outside the zoo's support.
GIANT_MOE_ARCH = MoeArch(
    n_layers=1300,
    hidden_size=51200,
    ffn_size=65536,
    total_params=125_000.0,
    active_params=22_000.0,
    expert_ffn_size=65536,
    gamma=1.9,
)
GIANT_MOE_TRAINING = TrainingSpec(100.0)


def giant_projection(weights: RegressionWeights = DEFAULT_WEIGHTS) -> float:
    """Adjusted score of the giant-MoE preset (the tanh adjustment is active)."""
    return predict_moe(GIANT_MOE_ARCH, GIANT_MOE_TRAINING, weights).adjusted_score


@dataclass(frozen=True)
class IntRange:
    """Inclusive integer range with a step, e.g. hidden sizes 4096..8192 by 1024."""

    lo: int
    hi: int
    step: int = 1

    def __post_init__(self):
        if self.lo < 1 or self.hi < self.lo or self.step < 1:
            raise DomainError(
                f"bad range {self.lo}:{self.hi}:{self.step}; need 1 <= lo <= hi and step >= 1",
                code="DOMAIN_ERROR",
            )

    def values(self) -> list[int]:
        return list(range(self.lo, self.hi + 1, self.step))


@dataclass(frozen=True)
class RatioRange:
    """Evenly spaced activation ratios (active/total) in (0, 1]."""

    lo: float
    hi: float
    steps: int = 1

    def __post_init__(self):
        if not 0.0 < self.lo <= self.hi <= 1.0:
            raise DomainError(
                "activation ratios need 0 < lo <= hi <= 1", code="DOMAIN_ERROR"
            )
        if self.steps < 1 or (self.steps == 1 and self.lo != self.hi):
            raise DomainError(
                "ratio range needs steps >= 2, or steps = 1 with lo = hi",
                code="DOMAIN_ERROR",
            )

    def values(self) -> list[float]:
        return [float(x) for x in np.linspace(self.lo, self.hi, self.steps)]


@dataclass(frozen=True)
class SearchConstraints:
    """Search space: a parameter budget, a token budget, and dimension grids.

    When ``moe`` is given, each shape additionally yields MoE candidates
    whose expert pool fills the whole parameter budget with the activated
    fraction swept over the ratio range (expert FFN width = ffn width).
    ``vocab_size`` feeds the parameter estimate; 0 models tied/ignored
    embeddings.
    """

    max_params: float
    token_budget: float
    layer_range: IntRange
    hidden_range: IntRange
    ffn_range: IntRange
    gamma: float = 1.0
    moe: RatioRange | None = None
    vocab_size: int = 128_000

    def __post_init__(self):
        if not self.max_params > 0:
            raise DomainError("max_params must be positive", code="DOMAIN_NONPOSITIVE")
        if not self.token_budget > 0:
            raise DomainError("token_budget must be positive", code="DOMAIN_NONPOSITIVE")
        if self.gamma < 0:
            raise DomainError("gamma must be >= 0", code="DOMAIN_NONPOSITIVE")
        if self.vocab_size < 0:
            raise DomainError("vocab_size must be >= 0", code="DOMAIN_NONPOSITIVE")


@dataclass(frozen=True)
class SearchHit:
    """One ranked search result."""

    arch: DenseArch | MoeArch
    est_params: float
    score: float

    def to_json_dict(self) -> dict:
        arch = {
            "layers": self.arch.n_layers,
            "hidden": self.arch.hidden_size,
            "ffn": self.arch.ffn_size,
            "gamma": self.arch.gamma,
        }
        if isinstance(self.arch, MoeArch):
            arch["kind"] = "moe"
            arch["expert_ffn"] = self.arch.expert_ffn_size
            arch["size_B"] = self.arch.total_params
            arch["act_B"] = self.arch.active_params
        else:
            arch["kind"] = "dense"
            arch["size_B"] = self.arch.param_count
        return {"arch": arch, "est_params": self.est_params, "score": self.score}


def search_architectures(
    constraints: SearchConstraints,
    weights: RegressionWeights = DEFAULT_WEIGHTS,
    top_k: int = 10,
) -> list[SearchHit]:
    """Exhaustively score every in-budget shape and rank them.

    The ranking is deterministic: adjusted score descending, then smaller
    estimated parameter count, then shallower, then narrower. An empty
    feasible set returns an empty list.
    """
    if top_k < 1:
        raise DomainError("top_k must be >= 1", code="DOMAIN_NONPOSITIVE")
    train = TrainingSpec(constraints.token_budget)
    hits = []
    for n in constraints.layer_range.values():
        for h in constraints.hidden_range.values():
            for d in constraints.ffn_range.values():
                est = estimate_param_count(n, h, d, constraints.vocab_size)
                if est > constraints.max_params:
                    continue
                dense = DenseArch(n, h, d, param_count=est, gamma=constraints.gamma)
                hits.append(SearchHit(dense, est, predict(dense, train, weights).adjusted_score))
                if constraints.moe is None:
                    continue
                for ratio in constraints.moe.values():
                    moe = MoeArch(
                        n, h, d,
                        total_params=constraints.max_params,
                        active_params=ratio * constraints.max_params,
                        expert_ffn_size=d,
                        gamma=constraints.gamma,
                    )
                    hits.append(SearchHit(moe, est, predict(moe, train, weights).adjusted_score))
    hits.sort(
        key=lambda hit: (
            -hit.score,
            hit.est_params,
            hit.arch.n_layers,
            hit.arch.hidden_size,
            hit.arch.ffn_size,
        )
    )
    return hits[:top_k]


@dataclass(frozen=True)
class ExpansionPlan:
    """Train ``small`` for ``small_tokens``, expand to ``large``, continue
    for ``large_tokens``.

    ``recovery_scale`` is the time constant (in trillions of tokens) for
    the post-expansion recovery penalty to die off.
    """

    small: DenseArch
    small_tokens: float
    large: DenseArch
    large_tokens: float
    recovery_scale: float = 0.1

    def __post_init__(self):
        if not self.small_tokens > 0 or not self.large_tokens > 0:
            raise DomainError("both token phases must be positive", code="DOMAIN_NONPOSITIVE")
        if not self.recovery_scale > 0:
            raise DomainError("recovery_scale must be positive", code="DOMAIN_NONPOSITIVE")
        grown = (
            self.large.n_layers >= self.small.n_layers
            and self.large.hidden_size >= self.small.hidden_size
            and self.large.ffn_size >= self.small.ffn_size
        )
        if not grown:
            raise DomainError(
                "large arch must dominate small arch in every dimension",
                code="DOMAIN_ERROR",
            )


def expansion_ratio(plan: ExpansionPlan) -> float:
    """Interpolation ratio between the small and large shapes.

    A token-weighted size blend, minus a recovery penalty that decays
    exponentially as post-expansion training proceeds.
    """
    s1, t1 = plan.small.param_count, plan.small_tokens
    s2, t2 = plan.large.param_count, plan.large_tokens
    blend = (s1 * t1 + s2 * t2) / ((t1 + t2) * s2)
    z = t2 / plan.recovery_scale
    recovery = 0.0 if z > 700.0 else t1 * s1 / (s2 * (1.0 + math.exp(z)))
    return blend - recovery


def predict_expanded(
    plan: ExpansionPlan, weights: RegressionWeights = DEFAULT_WEIGHTS
) -> PredictionResult:
    """Score a model grown from ``small`` to ``large`` mid-training.

    Effective dimensions interpolate between the two shapes by the
    expansion ratio; gamma comes from the large (current) training setup;
    the token term uses ALL tokens seen, with no saturation clip.
    """
    ratio = expansion_ratio(plan)
    n_eff = plan.small.n_layers + (plan.large.n_layers - plan.small.n_layers) * ratio
    h_eff = plan.small.hidden_size + (plan.large.hidden_size - plan.small.hidden_size) * ratio
    d_eff = plan.small.ffn_size + (plan.large.ffn_size - plan.small.ffn_size) * ratio
    if min(n_eff, h_eff, d_eff) <= 0:
        raise DomainError(
            f"expansion ratio {ratio:.6g} produces non-positive effective dimensions",
            code="DOMAIN_ERROR",
        )
    tokens = plan.small_tokens + plan.large_tokens
    u = _discount(n_eff, h_eff, d_eff, plan.large.gamma)
    feats = _log_args(u, n_eff, h_eff, d_eff, tokens)
    raw = score_from_features(feats, weights)
    return PredictionResult(raw, adjust_high_score(raw), tokens, u, token_clipped=False)


@dataclass(frozen=True)
class SplitResult:
    """Best expansion timing found on the split grid."""

    small_tokens: float
    large_tokens: float
    score: float

    def to_json_dict(self) -> dict:
        return {
            "small_tokens": self.small_tokens,
            "large_tokens": self.large_tokens,
            "score": self.score,
        }


def expansion_split_curve(
    small: DenseArch,
    large: DenseArch,
    total_tokens: float,
    weights: RegressionWeights = DEFAULT_WEIGHTS,
    grid: int = 41,
) -> list[tuple[float, float, float]]:
    """Score every candidate expansion point on an interior grid.

    Splits a fixed token budget as T1 = total * i / (grid + 1) for
    i = 1..grid (strictly inside (0, total)); returns (T1, T2, score)
    tuples in increasing-T1 order.
    """
    if not total_tokens > 0:
        raise DomainError("total_tokens must be positive", code="DOMAIN_NONPOSITIVE")
    if grid < 3:
        raise DomainError("split grid needs at least 3 points", code="DOMAIN_ERROR")
    curve = []
    for i in range(1, grid + 1):
        t1 = total_tokens * i / (grid + 1)
        t2 = total_tokens - t1
        plan = ExpansionPlan(small, t1, large, t2)
        curve.append((t1, t2, predict_expanded(plan, weights).adjusted_score))
    return curve


def optimize_expansion_split(
    small: DenseArch,
    large: DenseArch,
    total_tokens: float,
    weights: RegressionWeights = DEFAULT_WEIGHTS,
    grid: int = 41,
) -> SplitResult:
    """Pick the expansion point that maximizes the final score.

    Ties resolve to the earliest expansion (smallest T1).
    """
    curve = expansion_split_curve(small, large, total_tokens, weights, grid)
    best = max(curve, key=lambda point: point[2])
    for t1, t2, score in curve:  # first maximum = smallest T1
        if score == best[2]:
            return SplitResult(t1, t2, score)
    raise AssertionError("unreachable")
