"""Scoring single configurations.

Walks through the closed-form score for a dense model and a
mixture-of-experts model, and shows the two post-processing maps
(high-score adjustment and the MMLU-Pro conversion).
"""

from perflaw import (
    DenseArch,
    MoeArch,
    TrainingSpec,
    adjust_high_score,
    effective_tokens,
    mmlu_to_mmlu_pro,
    moe_expansion_factor,
    predict,
    unstable_discount,
)

# A 7B dense model trained on 3 trillion tokens.
mistral_like = DenseArch(n_layers=32, hidden_size=4096, ffn_size=14336, param_count=7)
train_3t = TrainingSpec(tokens=3)

result = predict(mistral_like, train_3t)
print("dense 7B @ 3T")
print(f"  raw score        : {result.raw_score:.9f}")
print(f"  adjusted score   : {result.adjusted_score:.9f}")
print(f"  depth discount   : {unstable_discount(mistral_like):.6f}")
print(f"  effective tokens : {result.effective_tokens} T (clipped: {result.token_clipped})")

# Token saturation: past the clip point, more tokens change nothing.
print("\ntoken saturation for the same 7B model")
for tokens in (1, 3, 7, 10, 30):
    r = predict(mistral_like, TrainingSpec(tokens))
    mark = " <- clipped" if r.token_clipped else ""
    print(f"  T={tokens:>3}T  score={r.adjusted_score:7.3f}{mark}")

# A Mixtral-style sparse model: 141B total, 39B active per token.
mixtral_like = MoeArch(
    n_layers=56,
    hidden_size=6144,
    ffn_size=16384,
    total_params=141,
    active_params=39,
    expert_ffn_size=16384,
)
result = predict(mixtral_like, TrainingSpec(10))
print("\nmoe 141B/39B @ 10T")
print(f"  raw score        : {result.raw_score:.9f}")
print(f"  expansion factor : {moe_expansion_factor(mixtral_like):.6f}")
print(f"  effective tokens : {result.effective_tokens:.4f} T (cap is sqrt(A*S))")

# The adjustment is the identity up to 90 and squashes above it.
print("\nhigh-score adjustment")
for raw in (85.0, 90.0, 92.0, 95.0, 100.0):
    print(f"  raw {raw:6.2f} -> adjusted {adjust_high_score(raw):7.4f}")

# MMLU above 70 can be mapped onto the harder MMLU-Pro scale.
print("\nMMLU -> MMLU-Pro")
for mmlu in (75.0, 82.0, 88.0):
    print(f"  {mmlu:.1f} -> {mmlu_to_mmlu_pro(mmlu):.2f}")

print(f"\neffective_tokens(T=9, S=4) = {effective_tokens(TrainingSpec(9), 4.0)}")
