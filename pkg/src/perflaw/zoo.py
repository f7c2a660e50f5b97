"""The bundled model zoo: a 55-model reference table and batch evaluation.

The dataset ships inside the package as a CSV (with a JSON mirror and a
manifest) and reproduces every published prediction within rounding
tolerance. Starred rows — configurations the original table marks as
guesses rather than disclosed values — are kept verbatim and flagged
``guessed_config`` so reports can annotate them.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .core import DEFAULT_WEIGHTS, DenseArch, MoeArch, RegressionWeights, TrainingSpec, predict
from .errors import DatasetError, DomainError

__all__ = [
    "ModelRecord",
    "ZooRow",
    "ZooReport",
    "SUBSETS",
    "LLAMA1_NAMES",
    "CHINESE_PREFIXES",
    "load_zoo",
    "load_manifest",
    "evaluate_zoo",
    "export_scatter",
    "packaged_dataset_path",
]

CSV_COLUMNS = (
    "name", "kind", "layers", "hidden", "ffn", "expert_ffn",
    "tokens_T", "size_B", "act_B", "mmlu", "guessed",
)

# Origin tags used by the scatter subsets. Classification is by name prefix,
# which is crude but matches how the table's discussion groups the models.
CHINESE_PREFIXES = ("Deepseek", "DeekSeek", "Skywork", "Qwen", "Yi", "GLM")
LLAMA1_NAMES = frozenset({"Llama 7B", "Llama 13B", "Llama 33B", "Llama 65B"})


@dataclass(frozen=True)
class ModelRecord:
    """One zoo row: a named model with its architecture and reported score."""

    name: str
    kind: str  # "dense" | "moe"
    n_layers: int
    hidden_size: int
    ffn_size: int
    expert_ffn_size: int | None
    tokens: float
    total_params: float
    active_params: float | None
    reported_mmlu: float
    guessed_config: bool

    def to_arch(self) -> DenseArch | MoeArch:
        if self.kind == "moe":
            return MoeArch(
                n_layers=self.n_layers,
                hidden_size=self.hidden_size,
                ffn_size=self.ffn_size,
                total_params=self.total_params,
                active_params=self.active_params,
                expert_ffn_size=self.expert_ffn_size,
            )
        return DenseArch(
            n_layers=self.n_layers,
            hidden_size=self.hidden_size,
            ffn_size=self.ffn_size,
            param_count=self.total_params,
        )

    def training(self) -> TrainingSpec:
        return TrainingSpec(self.tokens)

    def tags(self) -> tuple[str, ...]:
        tags = [self.kind]
        tags.append("chinese" if self.name.startswith(CHINESE_PREFIXES) else "english")
        if self.name in LLAMA1_NAMES:
            tags.append("llama1")
        if self.guessed_config:
            tags.append("guessed")
        return tuple(tags)

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "layers": self.n_layers,
            "hidden": self.hidden_size,
            "ffn": self.ffn_size,
            "expert_ffn": self.expert_ffn_size,
            "tokens_T": self.tokens,
            "size_B": self.total_params,
            "act_B": self.active_params,
            "mmlu": self.reported_mmlu,
            "guessed": self.guessed_config,
        }


@dataclass(frozen=True)
class ZooRow:
    """Evaluation of one record: diff = reported − predicted (positive means
    the model beat the prediction)."""

    name: str
    predicted: float
    reported: float
    diff: float
    tags: tuple[str, ...]

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "predicted": self.predicted,
            "reported": self.reported,
            "diff": self.diff,
            "tags": list(self.tags),
        }


@dataclass(frozen=True)
class ZooReport:
    """Batch evaluation: per-row predictions plus MAE / Pearson r summaries."""

    rows: tuple[ZooRow, ...]
    mae: float
    pearson_r: float | None
    subsets: dict

    def to_json_dict(self) -> dict:
        return {
            "rows": [r.to_json_dict() for r in self.rows],
            "mae": self.mae,
            "pearson_r": self.pearson_r,
            "subsets": self.subsets,
        }

    def report_bytes(self) -> bytes:
        """Canonical serialization; identical inputs give identical bytes."""
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":")).encode()


# Subset predicates over ZooRow, keyed by the names the CLI/service accept.
SUBSETS = {
    "all": lambda row: True,
    "dense": lambda row: "dense" in row.tags,
    "moe": lambda row: "moe" in row.tags,
    "guessed": lambda row: "guessed" in row.tags,
    "english": lambda row: "english" in row.tags,
    "chinese": lambda row: "chinese" in row.tags,
    "llama1": lambda row: "llama1" in row.tags,
    "english-ex-llama1": lambda row: "english" in row.tags and "llama1" not in row.tags,
}


def packaged_dataset_path() -> Path:
    """Filesystem path of the CSV bundled with the package."""
    return Path(str(resources.files("perflaw") / "data" / "table1.csv"))


def load_manifest() -> dict:
    """The bundled dataset manifest (row counts and column order)."""
    with (resources.files("perflaw") / "data" / "manifest.json").open("r", encoding="utf-8") as f:
        return json.load(f)


def _row_error(line_no: int, field: str, message: str) -> DatasetError:
    return DatasetError(f"row {line_no}: field {field!r}: {message}")


def _parse_int(raw: str, line_no: int, field: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise _row_error(line_no, field, f"expected an integer, got {raw!r}") from None
    if value <= 0:
        raise _row_error(line_no, field, "must be positive")
    return value


def _parse_float(raw: str, line_no: int, field: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise _row_error(line_no, field, f"expected a number, got {raw!r}") from None
    if value <= 0:
        raise _row_error(line_no, field, "must be positive")
    return value


def _parse_row(row: dict, line_no: int) -> ModelRecord:
    name = (row["name"] or "").strip()
    if not name:
        raise _row_error(line_no, "name", "must not be empty")
    kind = row["kind"]
    if kind not in ("dense", "moe"):
        raise _row_error(line_no, "kind", f"must be 'dense' or 'moe', got {kind!r}")
    guessed_raw = row["guessed"]
    if guessed_raw not in ("true", "false"):
        raise _row_error(line_no, "guessed", f"must be 'true' or 'false', got {guessed_raw!r}")

    has_expert = bool(row["expert_ffn"])
    has_act = bool(row["act_B"])
    if kind == "moe" and not (has_expert and has_act):
        raise _row_error(line_no, "kind", "moe rows need both expert_ffn and act_B")
    if kind == "dense" and (has_expert or has_act):
        raise _row_error(line_no, "kind", "dense rows must leave expert_ffn and act_B empty")

    mmlu = _parse_float(row["mmlu"], line_no, "mmlu")
    if mmlu >= 100:
        raise _row_error(line_no, "mmlu", "must be below 100")

    return ModelRecord(
        name=name,
        kind=kind,
        n_layers=_parse_int(row["layers"], line_no, "layers"),
        hidden_size=_parse_int(row["hidden"], line_no, "hidden"),
        ffn_size=_parse_int(row["ffn"], line_no, "ffn"),
        expert_ffn_size=_parse_int(row["expert_ffn"], line_no, "expert_ffn") if has_expert else None,
        tokens=_parse_float(row["tokens_T"], line_no, "tokens_T"),
        total_params=_parse_float(row["size_B"], line_no, "size_B"),
        active_params=_parse_float(row["act_B"], line_no, "act_B") if has_act else None,
        reported_mmlu=mmlu,
        guessed_config=guessed_raw == "true",
    )


def load_zoo(path: str | Path | None = None) -> list[ModelRecord]:
    """Load and strictly validate a zoo CSV; defaults to the bundled table.

    Every malformed row is reported with its line number and field name.
    """
    csv_path = packaged_dataset_path() if path is None else Path(path)
    if not csv_path.exists():
        raise DatasetError(f"dataset file not found: {csv_path}")
    with open(csv_path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None:
            raise DatasetError(f"{csv_path}: empty file, expected header {','.join(CSV_COLUMNS)}")
        if tuple(reader.fieldnames) != CSV_COLUMNS:
            raise DatasetError(
                f"{csv_path}: bad header {','.join(reader.fieldnames)!r}; "
                f"expected {','.join(CSV_COLUMNS)}"
            )
        records = []
        for line_no, row in enumerate(reader, start=2):
            if None in row or any(v is None for v in row.values()):
                raise DatasetError(f"row {line_no}: wrong number of fields")
            records.append(_parse_row(row, line_no))
    if not records:
        raise DatasetError(f"{csv_path}: no data rows")
    return records


def _summary(predicted: np.ndarray, reported: np.ndarray) -> tuple[float, float | None]:
    """MAE and Pearson r; r is None when undefined (fewer than 2 distinct points)."""
    mae = float(np.mean(np.abs(reported - predicted)))
    if len(predicted) < 2 or np.ptp(predicted) == 0 or np.ptp(reported) == 0:
        return mae, None
    return mae, float(np.corrcoef(predicted, reported)[0, 1])


def evaluate_zoo(
    records: list[ModelRecord], weights: RegressionWeights = DEFAULT_WEIGHTS
) -> ZooReport:
    """Predict every record and summarize accuracy overall and per subset."""
    if not records:
        raise DomainError("no records to evaluate", code="DOMAIN_ERROR")
    rows = []
    for rec in records:
        result = predict(rec.to_arch(), rec.training(), weights)
        rows.append(
            ZooRow(
                name=rec.name,
                predicted=result.adjusted_score,
                reported=rec.reported_mmlu,
                diff=rec.reported_mmlu - result.adjusted_score,
                tags=rec.tags(),
            )
        )
    predicted = np.array([r.predicted for r in rows])
    reported = np.array([r.reported for r in rows])
    mae, pearson_r = _summary(predicted, reported)

    subsets = {}
    for subset_name, keep in SUBSETS.items():
        mask = np.array([keep(r) for r in rows])
        if not mask.any():
            continue
        sub_mae, sub_r = _summary(predicted[mask], reported[mask])
        subsets[subset_name] = {"n": int(mask.sum()), "mae": sub_mae, "pearson_r": sub_r}

    return ZooReport(tuple(rows), mae, pearson_r, subsets)


def export_scatter(report: ZooReport, path: str | Path, subset: str = "all") -> int:
    """Write the (predicted, reported) scatter series as CSV, sorted by name.

    Returns the number of points written. Rows carry their subset tags
    joined with "|" so plots can be styled without re-deriving membership.
    """
    if subset not in SUBSETS:
        raise DomainError(
            f"unknown subset {subset!r}; expected one of {', '.join(sorted(SUBSETS))}",
            code="DOMAIN_ERROR",
        )
    rows = sorted((r for r in report.rows if SUBSETS[subset](r)), key=lambda r: r.name)
    if not rows:
        raise DomainError(f"no rows to export for subset {subset!r}", code="DOMAIN_ERROR")
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["predicted", "reported", "name", "tags"])
        for r in rows:
            writer.writerow([repr(r.predicted), repr(r.reported), r.name, "|".join(r.tags)])
    return len(rows)
