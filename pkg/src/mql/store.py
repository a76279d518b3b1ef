"""On-disk catalog of named models.

Layout: ``<store>/<name>/manifest.json`` (identity, schema, metrics) and
``<store>/<name>/params.json`` (learned parameters).  Floats inside params
are stored as decimal strings (shortest round-trip form), so a load returns
bit-identical 64-bit values.  Writes go to a temporary directory first and
are renamed into place.
"""

from __future__ import annotations

import json
import os
import shutil

from .errors import CorruptManifest, NameCollision, UnknownModel
from .learn.model import MetricRecord, Model

FORMAT_VERSION = 1

_SCALAR_FLOAT_KEYS = {"intercept", "lambda", "inertia"}
_VECTOR_FLOAT_KEYS = {
    "coefficients", "feature_medians", "means", "stds", "inertia_history",
}
_MATRIX_FLOAT_KEYS = {"X", "centroids", "centroids_original"}


def save_model(m: Model, store_dir: str, replace: bool = False) -> str:
    """Persist a model; returns its directory path."""
    os.makedirs(store_dir, exist_ok=True)
    final_dir = os.path.join(store_dir, m.name)
    if os.path.exists(final_dir):
        if not replace:
            raise NameCollision(
                f"model {m.name!r} already exists in {store_dir!r}"
            )
        shutil.rmtree(final_dir)
    tmp_dir = os.path.join(store_dir, f".tmp.{m.name}")
    if os.path.exists(tmp_dir):
        shutil.rmtree(tmp_dir)
    os.makedirs(tmp_dir)
    manifest = {
        "format_version": FORMAT_VERSION,
        "name": m.name,
        "ml_type": m.ml_type,
        "algorithm": m.algorithm,
        "feature_schema": [list(pair) for pair in m.feature_schema],
        "seed": m.seed,
        "created_at": m.created_at,
        "target_name": m.target_name,
        "class_labels": list(m.class_labels) if m.class_labels else None,
        "cluster_count": m.cluster_count,
        "train_metrics": m.train_metrics.to_dict() if m.train_metrics else None,
        "test_metrics": m.test_metrics.to_dict() if m.test_metrics else None,
        "notes": list(m.notes),
    }
    with open(os.path.join(tmp_dir, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(os.path.join(tmp_dir, "params.json"), "w", encoding="utf-8") as fh:
        json.dump(_encode(m.params), fh, indent=2, sort_keys=True)
        fh.write("\n")
    os.replace(tmp_dir, final_dir)
    return final_dir


def load_model(name: str, store_dir: str) -> Model:
    model_dir = os.path.join(store_dir, name)
    manifest_path = os.path.join(model_dir, "manifest.json")
    if not os.path.isfile(manifest_path):
        raise UnknownModel(f"no stored model named {name!r} in {store_dir!r}")
    try:
        with open(manifest_path, "r", encoding="utf-8") as fh:
            manifest = json.load(fh)
        with open(os.path.join(model_dir, "params.json"), "r", encoding="utf-8") as fh:
            raw_params = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise CorruptManifest(f"model {name!r} is unreadable: {e}") from None
    version = manifest.get("format_version")
    if version != FORMAT_VERSION:
        raise CorruptManifest(
            f"model {name!r} has format_version {version!r}, "
            f"supported: {FORMAT_VERSION}"
        )
    try:
        ml_type = manifest["ml_type"]
        return Model(
            name=manifest["name"],
            ml_type=ml_type,
            algorithm=manifest["algorithm"],
            feature_schema=tuple(
                (col, dtype) for col, dtype in manifest["feature_schema"]
            ),
            params=_decode(raw_params, ml_type),
            seed=manifest["seed"],
            train_metrics=_metrics(manifest.get("train_metrics")),
            test_metrics=_metrics(manifest.get("test_metrics")),
            class_labels=tuple(manifest["class_labels"])
            if manifest.get("class_labels") else None,
            cluster_count=manifest.get("cluster_count"),
            target_name=manifest.get("target_name"),
            created_at=manifest.get("created_at", ""),
            notes=tuple(manifest.get("notes", ())),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise CorruptManifest(f"model {name!r} is malformed: {e}") from None


def list_models(store_dir: str) -> list[dict]:
    """Manifests of every stored model, sorted by name."""
    if not os.path.isdir(store_dir):
        return []
    manifests = []
    for entry in sorted(os.listdir(store_dir)):
        manifest_path = os.path.join(store_dir, entry, "manifest.json")
        if os.path.isfile(manifest_path):
            with open(manifest_path, "r", encoding="utf-8") as fh:
                manifests.append(json.load(fh))
    return manifests


def delete_model(name: str, store_dir: str) -> None:
    model_dir = os.path.join(store_dir, name)
    if not os.path.isdir(model_dir):
        raise UnknownModel(f"no stored model named {name!r} in {store_dir!r}")
    shutil.rmtree(model_dir)


def _metrics(d: dict | None) -> MetricRecord | None:
    return MetricRecord.from_dict(d) if d else None


def _encode(value):
    """Floats become repr strings (bools are not ints here)."""
    if isinstance(value, bool):
        return value
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, dict):
        return {k: _encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    return value


def _decode(raw: dict, ml_type: str) -> dict:
    params: dict = {}
    for key, value in raw.items():
        if key in _SCALAR_FLOAT_KEYS:
            params[key] = float(value)
        elif key in _VECTOR_FLOAT_KEYS:
            params[key] = [float(v) for v in value]
        elif key in _MATRIX_FLOAT_KEYS:
            params[key] = [[float(v) for v in row] for row in value]
        elif key == "y":
            params[key] = [float(v) for v in value] if ml_type == "pred" else list(value)
        elif key == "nodes":
            params[key] = _decode_nodes(value, ml_type)
        elif key == "trees":
            params[key] = [_decode_nodes(nodes, ml_type) for nodes in value]
        else:
            params[key] = value
    return params


def _decode_nodes(nodes: list, ml_type: str) -> list:
    decoded = []
    for feat, threshold, left, right, value in nodes:
        if value is not None and ml_type == "pred":
            value = float(value)
        decoded.append([
            int(feat),
            None if threshold is None else float(threshold),
            int(left),
            int(right),
            value,
        ])
    return decoded
