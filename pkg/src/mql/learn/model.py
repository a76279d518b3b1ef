"""Trained-model record and its evaluation metrics."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import SchemaMismatch
from ..table import NUMERIC, Table


@dataclass(frozen=True)
class MetricRecord:
    mse: float | None = None
    r2: float | None = None
    accuracy_fraction: float | None = None
    silhouette: float | None = None
    normalized_score: float = 0.0

    def to_dict(self) -> dict:
        return {
            "mse": self.mse,
            "r2": self.r2,
            "accuracy_fraction": self.accuracy_fraction,
            "silhouette": self.silhouette,
            "normalized_score": self.normalized_score,
        }

    @staticmethod
    def from_dict(d: dict) -> "MetricRecord":
        return MetricRecord(
            mse=d.get("mse"),
            r2=d.get("r2"),
            accuracy_fraction=d.get("accuracy_fraction"),
            silhouette=d.get("silhouette"),
            normalized_score=d.get("normalized_score", 0.0),
        )


@dataclass
class Model:
    name: str
    ml_type: str                       # pred | class | clus
    algorithm: str
    feature_schema: tuple[tuple[str, str], ...]   # (column name, dtype)
    params: dict
    seed: int
    train_metrics: MetricRecord | None = None
    test_metrics: MetricRecord | None = None
    class_labels: tuple[str, ...] | None = None
    cluster_count: int | None = None
    target_name: str | None = None
    created_at: str = ""
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def feature_names(self) -> list[str]:
        return [name for name, _ in self.feature_schema]

    def score(self) -> float:
        """Archived normalized score: test metrics when present, else train."""
        record = self.test_metrics or self.train_metrics
        return record.normalized_score if record else 0.0


def feature_matrix(table: Table, features: list[str]) -> np.ndarray:
    """Dense float matrix of the named columns; missing cells are rejected."""
    columns = []
    for name in features:
        col = table.column(name)
        if col.dtype != NUMERIC:
            raise SchemaMismatch(f"feature column {name!r} is not numeric")
        if col.missing_count:
            raise SchemaMismatch(
                f"feature column {name!r} still has missing cells"
            )
        columns.append(col.cells)
    if not columns:
        return np.empty((table.row_count, 0))
    return np.array(columns, dtype=float).T


def check_schema(m: Model, rows: Table) -> None:
    """Verify ``rows`` carries every model feature with a numeric dtype."""
    for name, _ in m.feature_schema:
        if not rows.has_column(name):
            raise SchemaMismatch(
                f"table {rows.name!r} lacks model feature {name!r}"
            )
        if rows.column(name).dtype != NUMERIC:
            raise SchemaMismatch(f"column {name!r} must be numeric")
