"""perflaw: closed-form LLM benchmark score prediction and planning.

Predicts MMLU scores of dense and mixture-of-experts transformers from
architecture hyperparameters and training data size, with tooling for
coefficient calibration, a bundled 55-model reference zoo, architecture
search, sweeps, and model-expansion planning. A CLI (``perflaw``) and a
JSON HTTP service expose the same operations.
"""

from .calibration import (
    FEATURE_NAMES,
    FitReport,
    FitSample,
    GammaEstimate,
    ResidualFlag,
    build_sample,
    contamination_check,
    fit,
    infer_gamma,
)
from .core import (
    DEFAULT_WEIGHTS,
    DenseArch,
    MoeArch,
    PredictionResult,
    RegressionWeights,
    TrainingSpec,
    adjust_high_score,
    effective_tokens,
    estimate_param_count,
    log_features,
    mmlu_to_mmlu_pro,
    moe_expansion_factor,
    predict,
    predict_dense,
    predict_moe,
    score_from_features,
    unstable_discount,
)
from .errors import (
    DatasetError,
    DomainError,
    PerflawError,
    SingularDesignError,
    UnsupportedWeightsError,
)
from .planner import (
    GIANT_MOE_ARCH,
    GIANT_MOE_TRAINING,
    ExpansionPlan,
    IntRange,
    RatioRange,
    SearchConstraints,
    SearchHit,
    SplitResult,
    SweepSpec,
    expansion_ratio,
    expansion_split_curve,
    giant_projection,
    optimize_expansion_split,
    predict_expanded,
    search_architectures,
    sweep,
)
from .zoo import (
    ModelRecord,
    ZooReport,
    ZooRow,
    evaluate_zoo,
    export_scatter,
    load_manifest,
    load_zoo,
    packaged_dataset_path,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "PerflawError", "DomainError", "SingularDesignError",
    "UnsupportedWeightsError", "DatasetError",
    # core
    "DenseArch", "MoeArch", "TrainingSpec", "RegressionWeights",
    "PredictionResult", "DEFAULT_WEIGHTS", "effective_tokens",
    "unstable_discount", "moe_expansion_factor", "adjust_high_score",
    "mmlu_to_mmlu_pro", "estimate_param_count", "log_features",
    "score_from_features", "predict_dense", "predict_moe", "predict",
    # calibration
    "FitSample", "FitReport", "GammaEstimate", "ResidualFlag",
    "FEATURE_NAMES", "build_sample", "fit", "infer_gamma",
    "contamination_check",
    # zoo
    "ModelRecord", "ZooRow", "ZooReport", "load_zoo", "load_manifest",
    "evaluate_zoo", "export_scatter", "packaged_dataset_path",
    # planner
    "SweepSpec", "IntRange", "RatioRange", "SearchConstraints", "SearchHit",
    "ExpansionPlan", "SplitResult", "GIANT_MOE_ARCH", "GIANT_MOE_TRAINING",
    "sweep", "giant_projection", "search_architectures", "expansion_ratio",
    "predict_expanded", "expansion_split_curve", "optimize_expansion_split",
]
