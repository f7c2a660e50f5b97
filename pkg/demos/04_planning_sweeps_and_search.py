"""What-if planning: sweeps, the giant-model projection, and search.

Sweeps one quantity at a time around a 70B dense model, projects the
score of an extremely large sparse model, and grid-searches the best
architecture under a parameter budget.
"""

from perflaw import DenseArch, TrainingSpec
from perflaw.planner import (
    GIANT_MOE_ARCH,
    GIANT_MOE_TRAINING,
    IntRange,
    RatioRange,
    SearchConstraints,
    SweepSpec,
    giant_projection,
    search_architectures,
    sweep,
)

base = DenseArch(n_layers=80, hidden_size=8192, ffn_size=28672, param_count=70)
train = TrainingSpec(tokens=15)

# --- sweeps -----------------------------------------------------------
print("gamma sweep (training precision/stability penalty)")
for gamma, score in sweep(SweepSpec("gamma", 0.5, 3.0, 6, base, train)):
    print(f"  gamma={gamma:4.1f}  score={score:6.2f}")

print("\ntoken sweep (note the clip at S=70)")
for tokens, score in sweep(SweepSpec("tokens", 10, 110, 6, base, train)):
    print(f"  T={tokens:5.0f}T  score={score:6.2f}")

print("\ndepth sweep at fixed width (deeper is not always better)")
for layers, score in sweep(SweepSpec("n_layers", 16, 256, 7, base, train)):
    print(f"  N={layers:4.0f}  score={score:6.2f}")

# --- giant-model projection --------------------------------------------
print("\ngiant sparse model projection")
print(f"  config : N={GIANT_MOE_ARCH.n_layers}, h={GIANT_MOE_ARCH.hidden_size}, "
      f"S={GIANT_MOE_ARCH.total_params:.0f}B, A={GIANT_MOE_ARCH.active_params:.0f}B, "
      f"gamma={GIANT_MOE_ARCH.gamma}")
print(f"  tokens : {GIANT_MOE_TRAINING.tokens}T")
print(f"  score  : {giant_projection():.4f}")

# --- architecture search ----------------------------------------------
# Best config trainable with at most 8B parameters and 15T tokens.
constraints = SearchConstraints(
    max_params=8.0,
    token_budget=15.0,
    layer_range=IntRange(24, 48, 8),
    hidden_range=IntRange(3072, 5120, 1024),
    ffn_range=IntRange(8192, 16384, 2048),
)
print("\ntop dense architectures under an 8B budget")
for hit in search_architectures(constraints, top_k=5):
    a = hit.arch
    print(f"  N={a.n_layers:3d} h={a.hidden_size:5d} d={a.ffn_size:5d} "
          f"est={hit.est_params:5.2f}B  score={hit.score:6.2f}")

# The same search can also try sparse variants across activation ratios.
constraints = SearchConstraints(
    max_params=47.0,
    token_budget=10.0,
    layer_range=IntRange(32, 32),
    hidden_range=IntRange(4096, 4096),
    ffn_range=IntRange(14336, 14336),
    moe=RatioRange(0.25, 0.5, 2),
)
print("\ndense vs sparse at a 47B budget")
for hit in search_architectures(constraints, top_k=5):
    info = hit.to_json_dict()["arch"]
    kind = info["kind"]
    act = f" act={info['act_B']:5.2f}B" if kind == "moe" else ""
    print(f"  {kind:5s} est={hit.est_params:5.2f}B{act}  score={hit.score:6.2f}")
