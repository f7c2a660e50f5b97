"""Reproducing the bundled 55-model evaluation table.

Loads the packaged dataset, predicts every model with the default
weights, and prints the per-model comparison plus the summary
statistics for a few interesting subsets.
"""

import tempfile
from pathlib import Path

from perflaw.zoo import SUBSETS, evaluate_zoo, export_scatter, load_manifest, load_zoo

records = load_zoo()
manifest = load_manifest()
print(f"dataset: {manifest['dataset']} ({manifest['rows']} rows, "
      f"{manifest['moe']} moe, {manifest['guessed']} guessed configs)")

report = evaluate_zoo(records)

print(f"\n{'model':24s} {'pred':>7s} {'mmlu':>6s} {'diff':>7s}")
for row in report.rows:
    print(f"{row.name:24s} {row.predicted:7.2f} {row.reported:6.1f} {row.diff:+7.2f}")

r = "n/a" if report.pearson_r is None else f"{report.pearson_r:.4f}"
print(f"\noverall: n={len(report.rows)}  MAE={report.mae:.4f}  pearson_r={r}")

# Subset views. Models whose configs had to be guessed drag accuracy
# down, as do the four earliest entries.
print("\nsubsets")
for name in sorted(SUBSETS):
    stats = report.subsets[name]
    sub_r = "n/a" if stats["pearson_r"] is None else f"{stats['pearson_r']:.4f}"
    print(f"  {name:20s} n={stats['n']:>2}  MAE={stats['mae']:6.4f}  pearson_r={sub_r}")

# Export a predicted-vs-reported scatter for external plotting.
out = Path(tempfile.gettempdir()) / "perflaw_scatter.csv"
count = export_scatter(report, out, subset="english-ex-llama1")
print(f"\nwrote {count} scatter points to {out}")
print(out.read_text(encoding="utf-8").splitlines()[0])
