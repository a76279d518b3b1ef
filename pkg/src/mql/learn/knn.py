"""k-nearest-neighbour prediction over standardized features."""

from __future__ import annotations

import numpy as np

from ..errors import DegenerateDesign, KTooLarge
from ..table import Table, format_cell
from .model import Model, feature_matrix


def fit_knn(
    train: Table,
    target: str,
    features: list[str],
    task: str,
    *,
    k: int = 5,
    name: str = "",
    algorithm: str = "KNN",
    seed: int = 0,
) -> Model:
    """Memorize the standardized training matrix and its targets."""
    if not features:
        raise DegenerateDesign("no feature columns")
    X = feature_matrix(train, features)
    if k < 1:
        raise KTooLarge("k must be at least 1")
    if k > len(X):
        raise KTooLarge(f"k={k} exceeds the {len(X)} training rows")
    means = X.mean(axis=0)
    stds = X.std(axis=0)
    stds[stds == 0.0] = 1.0
    cells = train.column(target).cells
    if task == "pred":
        y = [float(c) for c in cells]
        labels = None
    else:
        y = [format_cell(c) for c in cells]
        labels = tuple(sorted(set(y)))
    return Model(
        name=name,
        ml_type=task,
        algorithm=algorithm,
        feature_schema=tuple((f, "numeric") for f in features),
        params={
            "X": [[float(v) for v in row] for row in (X - means) / stds],
            "y": y,
            "k": k,
            "means": [float(v) for v in means],
            "stds": [float(v) for v in stds],
            "feature_medians": [float(np.median(X[:, j])) for j in range(X.shape[1])],
        },
        seed=seed,
        class_labels=labels,
        target_name=target,
    )


def knn_predict(m: Model, X: np.ndarray) -> list:
    train_X = np.array(m.params["X"], dtype=float)
    y = m.params["y"]
    k = m.params["k"]
    means = np.array(m.params["means"], dtype=float)
    stds = np.array(m.params["stds"], dtype=float)
    Z = (X - means) / stds
    outputs = []
    for row in Z:
        dist = np.sqrt(((train_X - row) ** 2).sum(axis=1))
        # Stable sort on distance: equal distances keep row order, so the
        # lower-index neighbour wins ties.
        order = np.argsort(dist, kind="stable")[:k]
        neighbours = [y[i] for i in order]
        if m.ml_type == "pred":
            outputs.append(float(np.mean(neighbours)))
        else:
            counts: dict[str, int] = {}
            for label in neighbours:
                counts[label] = counts.get(label, 0) + 1
            top = max(counts.values())
            # Tie between labels: the one whose best neighbour sorts first.
            for label in neighbours:
                if counts[label] == top:
                    outputs.append(label)
                    break
    return outputs
