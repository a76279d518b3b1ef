"""Seeded k-means clustering with k-means++ initialization.

Features are standardized internally; the model stores centroids in both
the standardized space (used for assignment) and the original units (used
for display).
"""

from __future__ import annotations

import numpy as np

from ..errors import DegenerateDesign, KExceedsRows
from ..table import Table
from .model import Model, feature_matrix
from .rng import Lcg64

MAX_ITERATIONS = 300


def fit_kmeans(
    train: Table,
    features: list[str],
    k: int,
    seed: int,
    *,
    name: str = "",
    algorithm: str = "KMeans",
) -> Model:
    """Lloyd iterations to an assignment fixpoint (at most 300 rounds).

    An emptied cluster is re-seeded to the point farthest from its assigned
    centroid.  The per-iteration inertia log is kept on the model.
    """
    if not features:
        raise DegenerateDesign("no feature columns")
    X = feature_matrix(train, features)
    n = len(X)
    if k < 1:
        raise KExceedsRows("CLUSTER OF needs k >= 1")
    if k > n:
        raise KExceedsRows(f"k={k} exceeds the {n} available rows")
    means = X.mean(axis=0)
    stds = X.std(axis=0)
    stds[stds == 0.0] = 1.0
    Z = (X - means) / stds

    rng = Lcg64(seed)
    centroids = _plus_plus_init(Z, k, rng)
    assignment = None
    history: list[float] = []
    for _ in range(MAX_ITERATIONS):
        dist2 = ((Z[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new_assignment = np.argmin(dist2, axis=1)
        inertia = float(dist2[np.arange(n), new_assignment].sum())
        history.append(inertia)
        if assignment is not None and np.array_equal(assignment, new_assignment):
            break
        assignment = new_assignment
        for j in range(k):
            members = Z[assignment == j]
            if len(members):
                centroids[j] = members.mean(axis=0)
            else:
                # Re-seed to the point farthest from its current centroid.
                own = np.sqrt(dist2[np.arange(n), assignment])
                farthest = int(np.argmax(own))
                centroids[j] = Z[farthest]
                assignment[farthest] = j

    dist2 = ((Z[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    assignment = np.argmin(dist2, axis=1)
    inertia = float(dist2[np.arange(n), assignment].sum())
    original = centroids * stds + means
    return Model(
        name=name,
        ml_type="clus",
        algorithm=algorithm,
        feature_schema=tuple((f, "numeric") for f in features),
        params={
            "centroids": [[float(v) for v in row] for row in centroids],
            "centroids_original": [[float(v) for v in row] for row in original],
            "means": [float(v) for v in means],
            "stds": [float(v) for v in stds],
            "inertia": inertia,
            "inertia_history": history,
            "k": k,
            "feature_medians": [float(np.median(X[:, j])) for j in range(X.shape[1])],
        },
        seed=seed,
        cluster_count=k,
    )


def kmeans_assign(m: Model, X: np.ndarray) -> list[int]:
    means = np.array(m.params["means"], dtype=float)
    stds = np.array(m.params["stds"], dtype=float)
    centroids = np.array(m.params["centroids"], dtype=float)
    Z = (X - means) / stds
    dist2 = ((Z[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    return [int(i) for i in np.argmin(dist2, axis=1)]


def _plus_plus_init(Z: np.ndarray, k: int, rng: Lcg64) -> np.ndarray:
    n = len(Z)
    centroids = np.empty((k, Z.shape[1]))
    centroids[0] = Z[rng.randrange(n)]
    for j in range(1, k):
        dist2 = ((Z[:, None, :] - centroids[None, :j, :]) ** 2).sum(axis=2).min(axis=1)
        total = float(dist2.sum())
        if total == 0.0:
            centroids[j] = Z[rng.randrange(n)]
            continue
        draw = rng.random() * total
        cumulative = np.cumsum(dist2)
        centroids[j] = Z[int(np.searchsorted(cumulative, draw, side="right"))]
    return centroids
