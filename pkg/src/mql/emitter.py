"""Backend-script emission: each statement becomes a standalone script.

Scripts are assembled purely by placeholder substitution over the text
templates shipped in ``mql/templates``; the structure of the emitted code
lives in those files, not here.  Every script starts with a machine-parsable
``# mql:key=value`` header and prints ``PRED:`` / ``METRIC:`` lines.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from string import Template

from .analyzer import Delta, infer_class_column, resolve_features
from .errors import UnsupportedForEmission
from .exprs import eval_int_expr
from .syntax.nodes import (
    BinOp,
    Call,
    Categorize,
    ColRef,
    Deduplicate,
    Expr,
    Impute,
    Neg,
    Num,
    Numerize,
    Predicate,
)
from .table import CATEGORICAL, apply_where, parse_numeric

TEST_SIZE = 0.2

_NUMPY_FUNCS = {"log": "np.log", "log10": "np.log10", "exp": "np.exp",
                "abs": "np.abs", "sqrt": "np.sqrt"}

# Registry-to-backend estimator table: (algorithm, task) -> (import, constructor).
_BACKEND = {
    ("LinearRegression", "pred"): (
        "from sklearn.linear_model import LinearRegression",
        "LinearRegression()",
    ),
    ("Ridge", "pred"): (
        "from sklearn.linear_model import Ridge",
        "Ridge(alpha=1e-08)",
    ),
    ("DecisionTree", "pred"): (
        "from sklearn.tree import DecisionTreeRegressor",
        "DecisionTreeRegressor(max_depth=10, min_samples_leaf=2, "
        "random_state={seed})",
    ),
    ("DecisionTree", "class"): (
        "from sklearn.tree import DecisionTreeClassifier",
        "DecisionTreeClassifier(max_depth=10, min_samples_leaf=2, "
        "random_state={seed})",
    ),
    ("RandomForest", "pred"): (
        "from sklearn.ensemble import RandomForestRegressor",
        "RandomForestRegressor(n_estimators=100, max_depth=10, "
        "min_samples_leaf=2, random_state={seed})",
    ),
    ("RandomForest", "class"): (
        "from sklearn.ensemble import RandomForestClassifier",
        "RandomForestClassifier(n_estimators=100, max_depth=10, "
        "min_samples_leaf=2, random_state={seed})",
    ),
    ("KNN", "pred"): (
        "from sklearn.neighbors import KNeighborsRegressor",
        "KNeighborsRegressor(n_neighbors=5)",
    ),
    ("KNN", "class"): (
        "from sklearn.neighbors import KNeighborsClassifier",
        "KNeighborsClassifier(n_neighbors=5)",
    ),
}

_DEFAULT_ALGORITHM = {"pred": "LinearRegression", "class": "DecisionTree"}


@dataclass(frozen=True)
class ScriptArtifact:
    path: str
    text: str
    kind: str


@lru_cache(maxsize=None)
def _template(name: str) -> Template:
    text = resources.files("mql").joinpath("templates", name).read_text("utf-8")
    return Template(text)


def _stanza(name: str, values: dict) -> str:
    return _template(name).substitute(values).rstrip("\n")


def emit_script(d: Delta, session, index: int) -> ScriptArtifact:
    """Build the backend script for one validated statement and write it."""
    build = {
        "ins": _emit_inspect,
        "con": _emit_construct,
        "gen": _emit_generate,
    }[d.st_type]
    kind, text = build(d, session, index)
    text = text.rstrip("\n") + "\n"
    path = session.out_path(f"stmt{index:02d}_backend.py")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    session.record(path)
    return ScriptArtifact(path=path, text=text, kind=kind)


def build_script(d: Delta, session, index: int) -> str:
    """Script text without writing anything (golden tests)."""
    build = {
        "ins": _emit_inspect,
        "con": _emit_construct,
        "gen": _emit_generate,
    }[d.st_type]
    _, text = build(d, session, index)
    return text.rstrip("\n") + "\n"


# --- statement builders -----------------------------------------------------

def _emit_generate(d: Delta, session, index: int):
    if d.model == "stored":
        raise UnsupportedForEmission(
            "USING MODEL cannot be emitted: backend scripts cannot read the "
            "native model store"
        )
    base = _base_values(d, session, index)
    if d.ml_type == "clus":
        kind = "cluster"
        base["display_stanza"] = _display(d, base, "display_cluster", index) \
            if d.display else ""
        text = _template("generate_cluster.py.tmpl").substitute(base)
        return kind, text

    if d.model == "best":
        kind = f"best_{d.ml_type}"
        if d.over_table is not None:
            base["missing_stanza"] = _missing_stanza(session, base)
            base["best_predict_stanza"] = _stanza(
                "best_predict_over.stanza.tmpl", base
            )
        else:
            base["best_predict_stanza"] = _stanza(
                "best_predict_holdout.stanza.tmpl", base
            )
        base["accuracy"] = repr(float(d.accuracy))
        text = _template(f"best_{d.ml_type}.py.tmpl").substitute(base)
        return kind, text

    _add_model(d, base, session)
    if d.over_table is not None:
        kind = f"{d.ml_type}_over"
        base["missing_stanza"] = _missing_stanza(session, base)
        stanza = "display_bar" if d.ml_type == "pred" else "display_class_bar"
        base["display_stanza"] = _display(d, base, stanza, index) if d.display else ""
        text = _template(f"generate_{d.ml_type}_over.py.tmpl").substitute(base)
    else:
        kind = f"{d.ml_type}_holdout"
        stanza = "display_scatter" if d.ml_type == "pred" else "display_class_bar"
        base["display_stanza"] = _display(d, base, stanza, index) if d.display else ""
        text = _template(f"generate_{d.ml_type}_holdout.py.tmpl").substitute(base)
    return kind, text


def _emit_construct(d: Delta, session, index: int):
    base = _base_values(d, session, index)
    base["model_name"] = d.mod_name
    if d.model == "best":
        base["accuracy"] = repr(float(d.accuracy))
        base["best_predict_stanza"] = _stanza(
            "best_predict_holdout.stanza.tmpl", base
        )
        text = _template(f"best_{d.ml_type}.py.tmpl").substitute(base)
        return f"best_{d.ml_type}", text
    if d.ml_type == "clus":
        text = _template("construct_cluster.py.tmpl").substitute(base)
        return "construct_cluster", text
    _add_model(d, base, session)
    text = _template(f"construct_{d.ml_type}.py.tmpl").substitute(base)
    return f"construct_{d.ml_type}", text


def _emit_inspect(d: Delta, session, index: int):
    base = _base_values(d, session, index)
    stanzas = []
    for column, action in d.statement.actions:
        values = dict(base, column=column)
        if isinstance(action, Impute):
            stanzas.append(_stanza("inspect_impute.stanza.tmpl", values))
        elif isinstance(action, Numerize):
            values["numerize_expr"] = _pandas_expr(action.expr)
            stanzas.append(_stanza("inspect_numerize.stanza.tmpl", values))
        elif isinstance(action, Categorize):
            values["bin_count"] = str(len(action.labels))
            values["bin_labels"] = json.dumps(list(action.labels))
            stanzas.append(_stanza("inspect_categorize.stanza.tmpl", values))
        elif isinstance(action, Deduplicate):
            stanzas.append(_stanza("inspect_dedup.stanza.tmpl", values))
    base["stanzas"] = "\n\n".join(stanzas)
    safe = d.from_tables[0].replace(os.sep, "_").replace("/", "_")
    output_name = f"{safe}.inspected.csv"
    base["output_name"] = output_name
    session.emitted_bindings[d.from_tables[0]] = output_name
    text = _template("inspect.py.tmpl").substitute(base)
    return "inspect", text


# --- placeholder values ---------------------------------------------------------

def _base_values(d: Delta, session, index: int) -> dict:
    table = session.resolve_table(d.from_tables[0]) if d.from_tables else None
    filtered = apply_where(table, d.where) if table is not None else None
    count_star = filtered.row_count if filtered is not None else 0

    values: dict = {
        "statement": str(index),
        "seed": str(session.seed),
        "missing": session.missing_policy,
        "data_path": session.resolve_path(d.from_tables[0]) if d.from_tables else "",
        "where_stanza": "",
        "test_size": repr(TEST_SIZE),
    }
    if d.where is not None:
        values["where_stanza"] = _stanza(
            "where.stanza.tmpl", {"where_expr": _where_expr(d.where)}
        )

    if d.over_table is not None:
        values["over_path"] = session.resolve_path(d.over_table)

    class_column = None
    if d.ml_type == "class" and filtered is not None:
        class_column, _ = infer_class_column(filtered, d.class_labels)
        values["class_column"] = class_column
        values["class_labels_list"] = _labels_literal(
            d.class_labels, filtered, class_column
        )

    if d.st_type in ("gen", "con") and filtered is not None:
        features = resolve_features(d, filtered, class_column)
        values["features_list"] = json.dumps(features)

    if d.target is not None:
        values["target"] = d.target

    if d.train_n is not None:
        values["train_n"] = str(eval_int_expr(d.train_n, count_star))
        values["test_m"] = str(eval_int_expr(d.test_m, count_star))
        values["split_stanza"] = _stanza("split_counts.stanza.tmpl", values)
        values["cluster_split_stanza"] = _stanza(
            "cluster_split_counts.stanza.tmpl", values
        )
    else:
        values["split_stanza"] = _stanza("split_fraction.stanza.tmpl", values)
        values["cluster_split_stanza"] = _stanza(
            "cluster_split_fraction.stanza.tmpl", values
        )

    if d.k_expr is not None:
        values["k"] = str(eval_int_expr(d.k_expr, count_star))
    return values


def _add_model(d: Delta, values: dict, session) -> None:
    algorithm = d.alg_name if d.model == "custom" else _DEFAULT_ALGORITHM[d.ml_type]
    key = next(
        (k for k in _BACKEND if k[0].lower() == algorithm.lower()
         and k[1] == d.ml_type),
        None,
    )
    if key is None:
        raise UnsupportedForEmission(
            f"no backend template for algorithm {algorithm!r} ({d.ml_type})"
        )
    model_import, expr = _BACKEND[key]
    values["model_import"] = model_import
    values["model_expr"] = expr.format(seed=session.seed)


def _missing_stanza(session, values: dict) -> str:
    name = ("missing_impute" if session.missing_policy == "impute"
            else "missing_zero")
    return _stanza(f"{name}.stanza.tmpl", values)


def _display(d: Delta, values: dict, stanza: str | None, index: int) -> str:
    if stanza is None:
        return ""
    suffix = {"display_bar": "bar", "display_scatter": "scatter",
              "display_cluster": "clusters", "display_class_bar": "bar"}[stanza]
    extra = dict(values)
    extra["plot_name"] = f"stmt{index:02d}_backend_{suffix}.png"
    if stanza == "display_bar":
        if d.label_columns and d.over_table is not None:
            extra["bar_labels_expr"] = f'test_samples["{d.label_columns[0]}"]'
            extra["bar_label_name"] = d.label_columns[0]
        else:
            extra["bar_labels_expr"] = "range(1, len(predictions) + 1)"
            extra["bar_label_name"] = "row"
        extra["y_axis_name"] = d.target or "count"
    return "\n" + _stanza(f"{stanza}.stanza.tmpl", extra)


def _labels_literal(labels, table, class_column) -> str:
    if class_column is not None and table.column(class_column).dtype != CATEGORICAL:
        return "[" + ", ".join(_num_literal(parse_numeric(lb)) for lb in labels) + "]"
    return json.dumps(list(labels))


def _num_literal(value: float) -> str:
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def _where_expr(where: Predicate) -> str:
    parts = []
    for comp in where.comparisons:
        op = {"=": "==", "<>": "!="}.get(comp.op, comp.op)
        if isinstance(comp.value, str):
            literal = json.dumps(comp.value)
        else:
            literal = _num_literal(comp.value)
        parts.append(f'(df["{comp.column}"] {op} {literal})')
    return " & ".join(parts)


def _pandas_expr(e: Expr) -> str:
    if isinstance(e, Num):
        return _num_literal(e.value)
    if isinstance(e, ColRef):
        return f'df["{e.name}"]'
    if isinstance(e, Neg):
        return f"-({_pandas_expr(e.operand)})"
    if isinstance(e, BinOp):
        return f"({_pandas_expr(e.left)} {e.op} {_pandas_expr(e.right)})"
    if isinstance(e, Call):
        return f"{_NUMPY_FUNCS[e.func]}({_pandas_expr(e.arg)})"
    raise UnsupportedForEmission(f"expression {e!r} has no backend form")
