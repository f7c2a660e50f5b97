"""Fitting weights and diagnosing models.

Shows the weighted least-squares round trip (noiseless synthetic data
refits to the built-in coefficients), then the two diagnostic tools:
gamma inference from an observed score and the contamination check.
"""

import numpy as np

from perflaw import DEFAULT_WEIGHTS, DenseArch, TrainingSpec, predict_dense
from perflaw.calibration import (
    build_sample,
    contamination_check,
    fit,
    infer_gamma,
)

rng = np.random.default_rng(42)

# --- synthetic refit -------------------------------------------------
# Draw random dense configs, score them with the default weights, and
# check the fitter recovers those weights from the (noiseless) scores.
samples = []
while len(samples) < 12:
    arch = DenseArch(
        n_layers=int(rng.integers(8, 120)),
        hidden_size=int(rng.integers(1024, 16384)),
        ffn_size=int(rng.integers(2048, 48000)),
        param_count=float(rng.uniform(1, 400)),
    )
    train = TrainingSpec(float(rng.uniform(0.3, 15)))
    raw = predict_dense(arch, train).raw_score
    if not 0 < raw < 100:
        continue
    samples.append(build_sample(arch, train, observed=raw))

report = fit(samples)
print("refit from 12 noiseless samples")
for key, value in report.weights.to_json_dict().items():
    print(f"  {key} = {value:.6f}")
print(f"  MAE = {report.mae:.2e}")

defaults = np.array(DEFAULT_WEIGHTS.coeffs() + (DEFAULT_WEIGHTS.b,))
fitted = np.array(report.weights.coeffs() + (report.weights.b,))
print(f"  max deviation from defaults: {np.max(np.abs(fitted - defaults)):.2e}")

# --- gamma inference -------------------------------------------------
# Given an observed score, recover the precision coefficient that
# explains it. gamma near 1 is healthy training; much larger values
# indicate instability.
arch = DenseArch(80, 8192, 28672, 70)
train = TrainingSpec(2)
print("\ngamma inference for a 70B model @ 2T")
for true_gamma in (0.8, 1.0, 1.6, 2.4):
    observed = predict_dense(
        DenseArch(80, 8192, 28672, 70, gamma=true_gamma), train
    ).raw_score
    estimate = infer_gamma(arch, train, DEFAULT_WEIGHTS, observed)
    print(f"  observed {observed:6.2f} -> gamma = {estimate.gamma:.6f} "
          f"(true {true_gamma})")

# A score above the gamma=0 ceiling cannot be explained by any gamma.
estimate = infer_gamma(arch, train, DEFAULT_WEIGHTS, observed_score=99.0)
print(f"  observed  99.00 -> feasible = {estimate.feasible}")

# --- contamination check ---------------------------------------------
# A reported benchmark far above the law's prediction is suspicious.
print("\nresidual health flags (threshold 10 points)")
for predicted, observed in ((60.0, 62.0), (60.0, 75.0), (60.0, 45.0)):
    flag = contamination_check(predicted, observed)
    print(f"  predicted {predicted:.0f}, observed {observed:.0f} -> {flag.value}")
