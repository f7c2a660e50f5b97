"""Model-expansion planning: train small, grow, keep training.

An expansion run trains a small model on T1 tokens, grows it into a
large architecture, and trains for T2 more. The score is computed on an
interpolated architecture whose blend ratio reflects how much of the
total compute the large model saw, minus a recovery penalty that decays
as the post-expansion phase gets longer.
"""

from perflaw import DenseArch
from perflaw.planner import (
    ExpansionPlan,
    expansion_ratio,
    expansion_split_curve,
    optimize_expansion_split,
    predict_expanded,
)

small = DenseArch(n_layers=32, hidden_size=4096, ffn_size=14336, param_count=7)
large = DenseArch(n_layers=80, hidden_size=8192, ffn_size=28672, param_count=70)

# Score a fixed plan: 3T on the 7B model, then 1T more after expansion.
plan = ExpansionPlan(small=small, small_tokens=3.0, large=large, large_tokens=1.0)
result = predict_expanded(plan)
print("7B -> 70B, expand after 3T, then 1T more")
print(f"  blend ratio      : {expansion_ratio(plan):.6f}")
print(f"  score            : {result.adjusted_score:.9f}")
print(f"  effective tokens : {result.effective_tokens}T (no saturation clip here)")

# Longer post-expansion phases shift the blend toward the large model
# and shrink the recovery penalty.
print("\nsame 3T start, varying the post-expansion phase")
for t2 in (0.25, 0.5, 1.0, 2.0, 4.0, 8.0):
    p = ExpansionPlan(small=small, small_tokens=3.0, large=large, large_tokens=t2)
    print(f"  T2={t2:5.2f}T  ratio={expansion_ratio(p):.4f}  "
          f"score={predict_expanded(p).adjusted_score:6.2f}")

# Splitting a fixed total budget: where should the expansion happen?
total = 4.0
print(f"\nsplitting a fixed {total:.0f}T budget between the two phases")
for t1, t2, score in expansion_split_curve(small, large, total, grid=9):
    print(f"  expand after {t1:4.2f}T (then {t2:4.2f}T)  score={score:6.2f}")

best = optimize_expansion_split(small, large, total, grid=41)
print(f"\nbest split on a 41-point grid: expand after {best.small_tokens:.2f}T "
      f"-> score {best.score:.2f}")

# With growth concentrated in depth, the trade-off becomes non-trivial
# and an interior optimum appears.
deep_large = DenseArch(n_layers=512, hidden_size=8192, ffn_size=28672, param_count=70)
wide_small = DenseArch(n_layers=32, hidden_size=8192, ffn_size=28672, param_count=7)
best = optimize_expansion_split(wide_small, deep_large, total, grid=41)
print(f"\ndepth-heavy growth (32 -> 512 layers): expand after "
      f"{best.small_tokens:.2f}T -> score {best.score:.2f}")
for t1, t2, score in expansion_split_curve(wide_small, deep_large, total, grid=9):
    print(f"  expand after {t1:4.2f}T  score={score:7.3f}")
