"""Prediction dispatch and model evaluation."""

from __future__ import annotations

import numpy as np

from ..errors import EmptyTestSet, SchemaMismatch
from ..table import Table, format_cell
from .kmeans import kmeans_assign
from .knn import knn_predict
from .linear import linear_predict
from .model import MetricRecord, Model, check_schema, feature_matrix
from .tree import forest_predict, tree_predict


def predict(m: Model, rows: Table) -> list:
    """Per-row outputs: numbers (pred), labels (class) or cluster ids (clus)."""
    check_schema(m, rows)
    X = feature_matrix(rows, m.feature_names)
    if "coefficients" in m.params:
        return [float(v) for v in linear_predict(m, X)]
    if "trees" in m.params:
        return forest_predict(m.params["trees"], X, m.ml_type)
    if "nodes" in m.params:
        return tree_predict(m.params["nodes"], X)
    if "k" in m.params and "y" in m.params:
        return knn_predict(m, X)
    if "centroids" in m.params:
        return kmeans_assign(m, X)
    raise SchemaMismatch(f"model {m.name!r} has unrecognizable parameters")


def evaluate(m: Model, test: Table) -> MetricRecord:
    """Metric record on held-out rows; drives WITH MODEL ACCURACY checks."""
    if m.ml_type in ("pred", "class") and test.row_count == 0:
        raise EmptyTestSet("cannot evaluate on an empty test set")
    outputs = predict(m, test)
    if m.ml_type == "pred":
        actual = np.array(test.column(m.target_name).cells, dtype=float)
        predicted = np.array(outputs, dtype=float)
        residual = actual - predicted
        mse = float(np.mean(residual ** 2))
        ss_res = float((residual ** 2).sum())
        ss_tot = float(((actual - actual.mean()) ** 2).sum())
        if ss_tot == 0.0:
            r2 = 1.0 if ss_res == 0.0 else 0.0
        else:
            r2 = 1.0 - ss_res / ss_tot
        return MetricRecord(mse=mse, r2=r2, normalized_score=max(0.0, r2))
    if m.ml_type == "class":
        actual = [format_cell(c) for c in test.column(m.target_name).cells]
        matches = sum(1 for a, p in zip(actual, outputs) if a == p)
        fraction = matches / len(actual)
        return MetricRecord(accuracy_fraction=fraction, normalized_score=fraction)
    X = feature_matrix(test, m.feature_names)
    means = np.array(m.params["means"], dtype=float)
    stds = np.array(m.params["stds"], dtype=float)
    sil = silhouette((X - means) / stds, np.array(outputs, dtype=int))
    return MetricRecord(silhouette=sil, normalized_score=(sil + 1.0) / 2.0)


def silhouette(X: np.ndarray, assignment: np.ndarray) -> float:
    """Mean per-point silhouette; singleton clusters and k=1 score 0."""
    n = len(X)
    clusters = sorted(set(int(a) for a in assignment))
    if n == 0:
        raise EmptyTestSet("silhouette needs at least one row")
    if len(clusters) < 2:
        return 0.0
    dist = np.sqrt(((X[:, None, :] - X[None, :, :]) ** 2).sum(axis=2))
    scores = []
    for i in range(n):
        own = assignment[i]
        same = (assignment == own)
        if same.sum() == 1:
            scores.append(0.0)
            continue
        a = dist[i][same].sum() / (same.sum() - 1)
        b = min(
            dist[i][assignment == other].mean()
            for other in clusters
            if other != own
        )
        top = max(a, b)
        scores.append(0.0 if top == 0.0 else (b - a) / top)
    return float(np.mean(scores))
