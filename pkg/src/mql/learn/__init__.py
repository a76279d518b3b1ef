"""Native learning backend: splitting, training, prediction, evaluation."""

from .kmeans import fit_kmeans
from .knn import fit_knn
from .linear import fit_linear
from .metrics import evaluate, predict, silhouette
from .model import MetricRecord, Model, feature_matrix
from .registry import DEFAULTS, REGISTRY, default_for, lookup, sweep_for
from .rng import Lcg64, derive_seed
from .split import train_test_split
from .tree import fit_forest, fit_tree

__all__ = [
    "DEFAULTS", "Lcg64", "MetricRecord", "Model", "REGISTRY", "default_for",
    "derive_seed", "evaluate", "feature_matrix", "fit_forest", "fit_kmeans",
    "fit_knn", "fit_linear", "fit_tree", "lookup", "predict", "silhouette",
    "sweep_for", "train_test_split",
]
