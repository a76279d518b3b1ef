"""Least-squares linear models fit by the normal equations."""

from __future__ import annotations

import numpy as np

from ..errors import DegenerateDesign
from ..table import Table
from .model import Model, feature_matrix

#: Gram-matrix condition estimate above which the ridge fallback engages.
CONDITION_LIMIT = 1e12
FALLBACK_LAMBDA = 1e-8


def fit_linear(
    train: Table,
    target: str,
    features: list[str],
    ridge: float = 0.0,
    *,
    name: str = "",
    algorithm: str = "LinearRegression",
    seed: int = 0,
) -> Model:
    """Ordinary least squares with intercept on the augmented design matrix.

    A near-singular Gram matrix (condition estimate above 1e12) triggers a
    ridge refit with lambda = 1e-8; the fallback is recorded in the model
    notes.  The intercept is never penalized.
    """
    if not features:
        raise DegenerateDesign("no feature columns")
    if train.row_count < 2:
        raise DegenerateDesign(
            f"{train.row_count} training rows; at least 2 required"
        )
    X = feature_matrix(train, features)
    y = np.array(train.column(target).cells, dtype=float)
    design = np.column_stack([np.ones(len(X)), X])
    gram = design.T @ design
    moment = design.T @ y

    notes: list[str] = []
    lam = ridge
    if lam == 0.0 and _condition(gram) > CONDITION_LIMIT:
        lam = FALLBACK_LAMBDA
        notes.append(f"ridge fallback engaged (lambda={lam})")
    penalty = np.zeros_like(gram)
    if lam > 0.0:
        penalty = lam * np.eye(len(gram))
        penalty[0, 0] = 0.0
    try:
        beta = np.linalg.solve(gram + penalty, moment)
    except np.linalg.LinAlgError:
        lam = max(lam, FALLBACK_LAMBDA)
        notes.append(f"ridge fallback engaged (lambda={lam})")
        penalty = lam * np.eye(len(gram))
        penalty[0, 0] = 0.0
        beta = np.linalg.solve(gram + penalty, moment)

    train_medians = [float(np.median(X[:, j])) for j in range(X.shape[1])]
    return Model(
        name=name,
        ml_type="pred",
        algorithm=algorithm,
        feature_schema=tuple((f, "numeric") for f in features),
        params={
            "intercept": float(beta[0]),
            "coefficients": [float(b) for b in beta[1:]],
            "lambda": lam,
            "feature_medians": train_medians,
        },
        seed=seed,
        target_name=target,
        notes=tuple(notes),
    )


def linear_predict(m: Model, X: np.ndarray) -> np.ndarray:
    beta = np.array([m.params["intercept"]] + m.params["coefficients"])
    return np.column_stack([np.ones(len(X)), X]) @ beta


def _condition(gram: np.ndarray) -> float:
    try:
        value = np.linalg.cond(gram)
    except np.linalg.LinAlgError:
        return np.inf
    return value if np.isfinite(value) else np.inf
