"""Fitting the score coefficients and solving inverse problems.

The forward score is linear in log-feature space, so calibration is a
weighted least-squares problem over 4 slopes plus an intercept, and the
precision coefficient gamma can be recovered from one observation in
closed form (the score is affine in gamma^2).
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg

from .core import (
    DEFAULT_WEIGHTS,
    DenseArch,
    MoeArch,
    RegressionWeights,
    TrainingSpec,
    log_features,
    predict_dense,
)
from .errors import DomainError, SingularDesignError, UnsupportedWeightsError

__all__ = [
    "FitSample",
    "FitReport",
    "GammaEstimate",
    "ResidualFlag",
    "FEATURE_NAMES",
    "build_sample",
    "fit",
    "infer_gamma",
    "contamination_check",
]

FEATURE_NAMES = ("log_u_layers", "log_u_hidden", "log_u_ffn", "log_u_tokens", "intercept")

MIN_FIT_SAMPLES = 5


@dataclass(frozen=True)
class FitSample:
    """One regression observation: four log-features, a target score, a weight."""

    features: np.ndarray
    target: float
    weight: float = 1.0

    def __post_init__(self):
        feats = np.asarray(self.features, dtype=float)
        if feats.shape != (4,):
            raise DomainError("features must be a 4-vector", code="DOMAIN_ERROR")
        if not np.all(np.isfinite(feats)):
            raise DomainError("features must be finite", code="DOMAIN_ERROR")
        object.__setattr__(self, "features", feats)
        if not self.weight > 0:
            raise DomainError("weight must be positive", code="DOMAIN_NONPOSITIVE")


@dataclass(frozen=True)
class FitReport:
    """Result of a weighted least-squares fit."""

    weights: RegressionWeights
    residuals: np.ndarray
    mae: float
    pearson_r: float

    def to_json_dict(self) -> dict:
        return {
            "weights": self.weights.to_json_dict(),
            "residuals": [float(r) for r in self.residuals],
            "mae": self.mae,
            "pearson_r": self.pearson_r,
        }


@dataclass(frozen=True)
class GammaEstimate:
    """Inferred precision coefficient. ``gamma`` is None when infeasible."""

    gamma: float | None
    feasible: bool

    def to_json_dict(self) -> dict:
        return {"gamma": self.gamma, "feasible": self.feasible}


class ResidualFlag(enum.Enum):
    OK = "OK"
    CONTAMINATION_SUSPECT = "CONTAMINATION_SUSPECT"
    UNDERPERFORMANCE = "UNDERPERFORMANCE"


def build_sample(
    arch: DenseArch | MoeArch,
    train: TrainingSpec,
    observed: float,
    weight: float = 1.0,
) -> FitSample:
    """Turn an architecture plus an observed score into a regression sample.

    Up-sampling a trusted observation (for example one with a published
    contamination analysis) is expressed by passing weight > 1.
    """
    if not 0.0 < observed < 100.0:
        raise DomainError("observed score must be in (0, 100)", code="DOMAIN_ERROR")
    return FitSample(log_features(arch, train), observed, weight)


def _name_collinear_columns(design: np.ndarray) -> list[str]:
    # QR with column pivoting: columns pivoted past the numerical rank are
    # the ones that add no independent direction.
    _, r, piv = scipy.linalg.qr(design, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    tol = max(design.shape) * np.finfo(float).eps * (diag.max() if diag.size else 0.0)
    rank = int(np.sum(diag > tol))
    return sorted(FEATURE_NAMES[i] for i in piv[rank:])


def fit(samples: list[FitSample]) -> FitReport:
    """Weighted least squares over the samples via the normal equations.

    Minimizes sum_i weight_i * (target_i - prediction_i)^2. Raises
    SingularDesignError when the (weighted) design matrix is rank
    deficient; falls back to a pseudo-inverse with a warning when the
    normal equations are too ill-conditioned to factor.
    """
    if len(samples) < MIN_FIT_SAMPLES:
        raise DomainError(
            f"need at least {MIN_FIT_SAMPLES} samples to fit 5 parameters, got {len(samples)}",
            code="DOMAIN_ERROR",
        )
    design = np.column_stack(
        [np.vstack([s.features for s in samples]), np.ones(len(samples))]
    )
    targets = np.array([s.target for s in samples])
    sqrt_w = np.sqrt(np.array([s.weight for s in samples]))
    dw = design * sqrt_w[:, None]
    tw = targets * sqrt_w

    if np.linalg.matrix_rank(dw) < design.shape[1]:
        cols = ", ".join(_name_collinear_columns(dw))
        raise SingularDesignError(f"design matrix is rank deficient; collinear columns: {cols}")

    gram = dw.T @ dw
    rhs = dw.T @ tw
    try:
        beta = scipy.linalg.solve(gram, rhs, assume_a="pos")
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError):
        warnings.warn(
            "normal equations are near singular; falling back to pseudo-inverse",
            RuntimeWarning,
            stacklevel=2,
        )
        beta = np.linalg.pinv(dw) @ tw

    fitted = RegressionWeights(*(float(x) for x in beta))
    predictions = design @ beta
    residuals = targets - predictions
    mae = float(np.mean(np.abs(residuals)))
    pearson_r = float(np.corrcoef(predictions, targets)[0, 1])
    return FitReport(fitted, residuals, mae, pearson_r)


def infer_gamma(
    arch: DenseArch,
    train: TrainingSpec,
    weights: RegressionWeights,
    observed: float,
) -> GammaEstimate:
    """Recover gamma from one observed (raw-scale) score, in closed form.

    The score at fixed shape and tokens is score(0) - sum(w) * (c*N)^2 *
    gamma^2 with c = 10/ffn + 20/hidden, so a single observation pins
    gamma exactly. An observation above the gamma=0 score is infeasible
    and returns feasible=False. ``arch.gamma`` is ignored: it is the
    unknown being estimated.
    """
    coeff_sum = float(np.sum(weights.coeffs()))
    if coeff_sum <= 0:
        raise UnsupportedWeightsError(
            "gamma inference needs a positive coefficient sum; the score would not "
            "decrease in gamma"
        )
    score0 = predict_dense(replace(arch, gamma=0.0), train, weights).raw_score
    if observed > score0:
        return GammaEstimate(None, False)
    c = 10.0 / arch.ffn_size + 20.0 / arch.hidden_size
    gamma = math.sqrt((score0 - observed) / (coeff_sum * (c * arch.n_layers) ** 2))
    return GammaEstimate(gamma, True)


def contamination_check(
    predicted: float, observed: float, threshold: float = 10.0
) -> ResidualFlag:
    """Flag a score that departs from its prediction by more than threshold.

    An observation far ABOVE the prediction suggests benchmark data leaked
    into training; far below suggests a training problem.
    """
    if observed - predicted > threshold:
        return ResidualFlag.CONTAMINATION_SUSPECT
    if predicted - observed > threshold:
        return ResidualFlag.UNDERPERFORMANCE
    return ResidualFlag.OK
