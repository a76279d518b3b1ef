"""CART decision trees and bootstrap forests over numeric features.

Splits are axis-aligned at midpoints of sorted distinct values, scored by
variance reduction (regression) or Gini impurity decrease (classification).
Ties keep the first candidate in (feature order, threshold) order.  Rows
with value <= threshold go left.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import DegenerateDesign
from ..table import Table, format_cell
from .model import Model, feature_matrix
from .rng import Lcg64, derive_seed

LEAF = -1


def fit_tree(
    train: Table,
    target: str,
    features: list[str],
    task: str,
    *,
    max_depth: int = 10,
    min_leaf: int = 2,
    name: str = "",
    algorithm: str = "DecisionTree",
    seed: int = 0,
) -> Model:
    """Grow a single deterministic CART tree."""
    X, y, labels = _training_arrays(train, target, features, task)
    nodes = _grow(X, y, task, max_depth, min_leaf)
    return Model(
        name=name,
        ml_type=task,
        algorithm=algorithm,
        feature_schema=tuple((f, "numeric") for f in features),
        params={
            "nodes": nodes,
            "max_depth": max_depth,
            "min_leaf": min_leaf,
            "feature_medians": _medians(X),
        },
        seed=seed,
        class_labels=labels,
        target_name=target,
    )


def fit_forest(
    train: Table,
    target: str,
    features: list[str],
    task: str,
    *,
    n_trees: int = 100,
    max_depth: int = 10,
    min_leaf: int = 2,
    bootstrap: bool = True,
    feature_subsample: bool = True,
    name: str = "",
    algorithm: str = "RandomForest",
    seed: int = 0,
) -> Model:
    """Bootstrap forest; per-tree streams derive from (seed, tree index).

    Each split samples ceil(sqrt(d)) candidate features when subsampling is
    on.  Prediction averages trees (regression) or takes the majority label
    with lexicographic tie-break (classification).
    """
    X, y, labels = _training_arrays(train, target, features, task)
    n, d = X.shape
    n_sub = math.ceil(math.sqrt(d)) if feature_subsample else None
    trees = []
    for t in range(n_trees):
        rng = Lcg64(derive_seed(seed, t))
        if bootstrap:
            rows = [rng.randrange(n) for _ in range(n)]
            Xb, yb = X[rows], y[rows]
        else:
            Xb, yb = X, y
        trees.append(_grow(Xb, yb, task, max_depth, min_leaf, rng=rng, n_sub=n_sub))
    return Model(
        name=name,
        ml_type=task,
        algorithm=algorithm,
        feature_schema=tuple((f, "numeric") for f in features),
        params={
            "trees": trees,
            "n_trees": n_trees,
            "max_depth": max_depth,
            "min_leaf": min_leaf,
            "bootstrap": bootstrap,
            "feature_subsample": feature_subsample,
            "feature_medians": _medians(X),
        },
        seed=seed,
        class_labels=labels,
        target_name=target,
    )


def tree_predict(nodes: list, X: np.ndarray) -> list:
    return [_walk(nodes, row) for row in X]


def forest_predict(trees: list, X: np.ndarray, task: str) -> list:
    per_tree = [tree_predict(nodes, X) for nodes in trees]
    outputs = []
    for i in range(len(X)):
        votes = [preds[i] for preds in per_tree]
        if task == "pred":
            outputs.append(float(np.mean(votes)))
        else:
            outputs.append(_majority(votes))
    return outputs


def _walk(nodes: list, row: np.ndarray):
    i = 0
    while True:
        feat, threshold, left, right, value = nodes[i]
        if feat == LEAF:
            return value
        i = left if row[feat] <= threshold else right


def _majority(votes: list[str]) -> str:
    counts: dict[str, int] = {}
    for v in votes:
        counts[v] = counts.get(v, 0) + 1
    top = max(counts.values())
    return min(v for v, c in counts.items() if c == top)


def _training_arrays(train: Table, target: str, features: list[str], task: str):
    if not features:
        raise DegenerateDesign("no feature columns")
    if train.row_count == 0:
        raise DegenerateDesign("no training rows")
    X = feature_matrix(train, features)
    cells = train.column(target).cells
    if task == "pred":
        y = np.array(cells, dtype=float)
        labels = None
    else:
        y = np.array([format_cell(c) for c in cells], dtype=object)
        labels = tuple(sorted(set(y)))
    return X, y, labels


def _medians(X: np.ndarray) -> list[float]:
    return [float(np.median(X[:, j])) for j in range(X.shape[1])]


def _grow(
    X: np.ndarray,
    y: np.ndarray,
    task: str,
    max_depth: int,
    min_leaf: int,
    rng: Lcg64 | None = None,
    n_sub: int | None = None,
) -> list:
    """Build the flat node list [feature, threshold, left, right, value]."""
    if task == "class":
        classes = sorted(set(y))
        code = {c: i for i, c in enumerate(classes)}
        y_enc = np.array([code[v] for v in y])
        onehot = np.eye(len(classes))[y_enc]
    else:
        classes = None
        onehot = None

    nodes: list = []

    def leaf_value(idx: np.ndarray):
        if task == "pred":
            return float(np.mean(y[idx]))
        counts: dict[str, int] = {}
        for v in y[idx]:
            counts[v] = counts.get(v, 0) + 1
        top = max(counts.values())
        return min(v for v, c in counts.items() if c == top)

    def build(idx: np.ndarray, depth: int) -> int:
        node_id = len(nodes)
        nodes.append(None)
        split = None
        if depth < max_depth and len(idx) >= 2 * min_leaf:
            split = _best_split(X, y, onehot, task, idx, min_leaf, rng, n_sub)
        if split is None:
            nodes[node_id] = [LEAF, None, -1, -1, leaf_value(idx)]
            return node_id
        feat, threshold = split
        mask = X[idx, feat] <= threshold
        left = build(idx[mask], depth + 1)
        right = build(idx[~mask], depth + 1)
        nodes[node_id] = [int(feat), float(threshold), left, right, None]
        return node_id

    build(np.arange(len(y)), 0)
    return nodes


def _best_split(X, y, onehot, task, idx, min_leaf, rng, n_sub):
    n = len(idx)
    d = X.shape[1]
    if n_sub is not None and n_sub < d:
        candidates = sorted(rng.sample_indices(d, n_sub))
    else:
        candidates = range(d)

    X_node = X[idx]
    y_node = y[idx] if task == "pred" else None
    hot_node = onehot[idx] if task == "class" else None

    best_gain = 0.0
    best = None
    for feat in candidates:
        values = X_node[:, feat]
        # Sort stability is irrelevant: candidate positions sit only at
        # distinct-value boundaries, where prefix sums are order-free.
        order = np.argsort(values)
        vs = values[order]
        positions = np.flatnonzero(vs[1:] != vs[:-1]) + 1  # k: left size
        positions = positions[(positions >= min_leaf) & (positions <= n - min_leaf)]
        if len(positions) == 0:
            continue
        k = positions
        if task == "pred":
            ys = y_node[order]
            cs = np.cumsum(ys)
            cq = np.cumsum(ys * ys)
            sse_left = cq[k - 1] - cs[k - 1] ** 2 / k
            sse_right = (cq[-1] - cq[k - 1]) - (cs[-1] - cs[k - 1]) ** 2 / (n - k)
            parent = cq[-1] - cs[-1] ** 2 / n
            gains = parent - (sse_left + sse_right)
        else:
            cum = np.cumsum(hot_node[order], axis=0)
            left_counts = cum[k - 1]
            right_counts = cum[-1] - left_counts
            # Gini impurity scaled by node size: n_c - sum(counts^2)/n_c
            gini_left = k - (left_counts ** 2).sum(axis=1) / k
            gini_right = (n - k) - (right_counts ** 2).sum(axis=1) / (n - k)
            parent = n - (cum[-1] ** 2).sum() / n
            gains = parent - (gini_left + gini_right)
        j = int(np.argmax(gains))
        if gains[j] > best_gain + 1e-12:
            split_at = int(positions[j])
            best_gain = float(gains[j])
            best = (feat, (vs[split_at - 1] + vs[split_at]) / 2.0)
    return best
