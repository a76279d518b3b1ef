"""Name -> algorithm registry with per-task defaults.

Defaults: LinearRegression for prediction, DecisionTree for
classification, KMeans for clustering.  Lookup is case-insensitive; a name
bound to the wrong task class is as unknown as a missing one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..errors import UnknownAlgorithm
from ..table import Table
from .kmeans import fit_kmeans
from .knn import fit_knn
from .linear import fit_linear
from .model import Model
from .tree import fit_forest, fit_tree

RIDGE_LAMBDA = 1e-8
TREE_MAX_DEPTH = 10
TREE_MIN_LEAF = 2
FOREST_TREES = 100
KNN_K = 5
DEFAULT_SEED = 42


@dataclass(frozen=True)
class AlgorithmSpec:
    name: str
    tasks: frozenset[str]
    fit: Callable


def _fit_linear(train, target, features, task, k, seed, name):
    return fit_linear(train, target, features, ridge=0.0, name=name,
                      algorithm="LinearRegression", seed=seed)


def _fit_ridge(train, target, features, task, k, seed, name):
    return fit_linear(train, target, features, ridge=RIDGE_LAMBDA, name=name,
                      algorithm="Ridge", seed=seed)


def _fit_tree(train, target, features, task, k, seed, name):
    return fit_tree(train, target, features, task, max_depth=TREE_MAX_DEPTH,
                    min_leaf=TREE_MIN_LEAF, name=name, seed=seed)


def _fit_forest(train, target, features, task, k, seed, name):
    return fit_forest(train, target, features, task, n_trees=FOREST_TREES,
                      max_depth=TREE_MAX_DEPTH, min_leaf=TREE_MIN_LEAF,
                      name=name, seed=seed)


def _fit_knn(train, target, features, task, k, seed, name):
    return fit_knn(train, target, features, task, k=KNN_K, name=name, seed=seed)


def _fit_kmeans(train, target, features, task, k, seed, name):
    return fit_kmeans(train, features, k, seed, name=name)


REGISTRY: dict[str, AlgorithmSpec] = {
    spec.name.lower(): spec
    for spec in (
        AlgorithmSpec("LinearRegression", frozenset({"pred"}), _fit_linear),
        AlgorithmSpec("Ridge", frozenset({"pred"}), _fit_ridge),
        AlgorithmSpec("DecisionTree", frozenset({"pred", "class"}), _fit_tree),
        AlgorithmSpec("RandomForest", frozenset({"pred", "class"}), _fit_forest),
        AlgorithmSpec("KNN", frozenset({"pred", "class"}), _fit_knn),
        AlgorithmSpec("KMeans", frozenset({"clus"}), _fit_kmeans),
    )
}

DEFAULTS = {"pred": "LinearRegression", "class": "DecisionTree", "clus": "KMeans"}


def lookup(name: str, ml_type: str) -> AlgorithmSpec:
    spec = REGISTRY.get(name.lower())
    if spec is None:
        raise UnknownAlgorithm(
            f"unknown algorithm {name!r}; known: "
            + ", ".join(sorted(s.name for s in REGISTRY.values()))
        )
    if ml_type not in spec.tasks:
        raise UnknownAlgorithm(
            f"algorithm {spec.name} does not support {ml_type} tasks"
        )
    return spec


def default_for(ml_type: str) -> AlgorithmSpec:
    return REGISTRY[DEFAULTS[ml_type].lower()]


def sweep_for(ml_type: str) -> list[AlgorithmSpec]:
    """All algorithms of a task class, in registry order (best-mode sweep)."""
    return [s for s in REGISTRY.values() if ml_type in s.tasks]


def fit(spec: AlgorithmSpec, train: Table, target: str | None,
        features: list[str], ml_type: str, k: int | None, seed: int,
        name: str) -> Model:
    return spec.fit(train, target, features, ml_type, k, seed, name)
