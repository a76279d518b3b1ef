"""Statement descriptors and pre-execution validation.

``gather`` reduces a parsed statement to the flat descriptor the planner
dispatches on; ``validate`` checks a descriptor against the tables and
models it names and reports diagnostics instead of auto-correcting
(datatype problems fail the program, they are never wrangled implicitly).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .errors import EmptyColumn, RangeError
from .syntax.nodes import (
    Categorize,
    Classification,
    Cluster,
    Construct,
    Expr,
    Generate,
    Inspect,
    Numerize,
    ColRef,
    BinOp,
    Call,
    Neg,
    Predicate,
    Prediction,
    Star,
    Statement,
)
from .table import CATEGORICAL, NUMERIC, Table, column_stats, parse_numeric

log = logging.getLogger("mql")


@dataclass(frozen=True)
class Delta:
    """Descriptor record driving planning and emission."""

    st_type: str                             # gen | con | ins
    model: str = "default"                   # stored | custom | default | best
    ml_type: str | None = None               # pred | class | clus
    mod_name: str | None = None
    alg_name: str | None = None
    accuracy: float | None = None            # normalized to (0,1]
    display: bool = False
    label: bool = False
    label_columns: tuple[str, ...] = ()
    features: tuple[str, ...] | Star | None = None
    target: str | None = None
    class_labels: tuple[str, ...] | None = None
    k_expr: Expr | None = None
    over_table: str | None = None
    train_n: Expr | None = None
    test_m: Expr | None = None
    supervision: str | None = None
    from_tables: tuple[str, ...] = ()
    where: Predicate | None = None
    statement: Statement | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    statement_index: int | None = None
    clause: str | None = None

    def render(self) -> str:
        where = f" (statement {self.statement_index})" if self.statement_index else ""
        return f"error[{self.code}]{where}: {self.message}"


def normalize_accuracy(p: float) -> float:
    """Scale an accuracy threshold into (0,1]; percentages are divided by 100."""
    if p <= 0 or p > 100:
        raise RangeError(f"MODEL ACCURACY must be in (0,100], got {p}")
    if p <= 1:
        return p
    log.warning("MODEL ACCURACY %s read as a percentage (%s)", p, p / 100)
    return p / 100


def gather(s: Statement) -> Delta:
    """Extract the descriptor of a parsed statement (total function)."""
    if isinstance(s, Generate):
        accuracy = None if s.accuracy is None else normalize_accuracy(s.accuracy)
        if s.model_name is not None:
            model = "stored"
        elif s.algorithm is not None:
            model = "custom"
        elif accuracy is not None:
            model = "best"
        else:
            model = "default"
        return Delta(
            st_type="gen",
            model=model,
            ml_type=_ml_type(s.task),
            mod_name=s.model_name,
            alg_name=s.algorithm,
            accuracy=accuracy,
            display=s.display,
            label=bool(s.labels),
            label_columns=s.labels,
            features=s.features,
            target=s.task.target if isinstance(s.task, Prediction) else None,
            class_labels=s.task.labels if isinstance(s.task, Classification) else None,
            k_expr=s.task.k if isinstance(s.task, Cluster) else None,
            over_table=s.over,
            from_tables=s.from_tables,
            where=s.where,
            statement=s,
        )
    if isinstance(s, Construct):
        accuracy = None if s.accuracy is None else normalize_accuracy(s.accuracy)
        if s.algorithm is not None:
            model = "custom"
        elif accuracy is not None:
            model = "best"
        else:
            model = "default"
        return Delta(
            st_type="con",
            model=model,
            ml_type=_ml_type(s.task),
            mod_name=s.model_name,
            alg_name=s.algorithm,
            accuracy=accuracy,
            features=s.features,
            target=s.task.target if isinstance(s.task, Prediction) else None,
            class_labels=s.task.labels if isinstance(s.task, Classification) else None,
            k_expr=s.task.k if isinstance(s.task, Cluster) else None,
            train_n=s.train_n,
            test_m=s.test_m,
            supervision=s.supervision,
            from_tables=s.from_tables,
            where=s.where,
            statement=s,
        )
    if isinstance(s, Inspect):
        return Delta(
            st_type="ins",
            from_tables=s.from_tables,
            where=s.where,
            statement=s,
        )
    raise TypeError(f"not a statement: {s!r}")


def _ml_type(task) -> str:
    if isinstance(task, Prediction):
        return "pred"
    if isinstance(task, Classification):
        return "class"
    return "clus"


def infer_class_column(table: Table, labels: tuple[str, ...]) -> tuple[str | None, str | None]:
    """Find the unique column whose distinct values contain every label.

    Returns (column_name, None) on success, (None, error_kind) otherwise,
    where error_kind is "unknown" (no candidate) or "ambiguous".
    """
    candidates = []
    for col in table.columns:
        try:
            distinct = column_stats(table, col.name).distinct
        except EmptyColumn:
            continue
        if col.dtype == NUMERIC:
            wanted = [parse_numeric(lb) for lb in labels]
            if any(w is None for w in wanted):
                continue
            if all(w in distinct for w in wanted):
                candidates.append(col.name)
        else:
            if all(lb in distinct for lb in labels):
                candidates.append(col.name)
    if not candidates:
        return None, "unknown"
    if len(candidates) > 1:
        return None, "ambiguous"
    return candidates[0], None


def resolve_features(d: Delta, table: Table, class_column: str | None = None) -> list[str]:
    """Expand ``FEATURES *`` against a table and drop target/label columns."""
    excluded = set(d.label_columns)
    if d.target is not None:
        excluded.add(d.target)
    if class_column is not None:
        excluded.add(class_column)
    if isinstance(d.features, Star):
        return [c.name for c in table.columns if c.name not in excluded]
    return [f for f in d.features if f not in excluded]


class MemoryCatalog:
    """Catalog over in-memory tables and manifests (tests, validation)."""

    def __init__(self, tables: dict[str, Table] | None = None,
                 manifests: dict[str, dict] | None = None):
        self.tables = dict(tables or {})
        self.manifests = dict(manifests or {})

    def resolve_table(self, name: str) -> Table | None:
        return self.tables.get(name)

    def model_manifest(self, name: str) -> dict | None:
        return self.manifests.get(name)


def validate(d: Delta, catalog) -> list[Diagnostic]:
    """Check a descriptor against schemas and the model store.

    ``catalog`` needs ``resolve_table(name) -> Table | None`` and
    ``model_manifest(name) -> dict | None``.  An empty list means valid.
    """
    diags: list[Diagnostic] = []

    if len(d.from_tables) > 1:
        diags.append(Diagnostic(
            "MQL-112",
            "only a single FROM table is supported; pre-join the data first",
            clause="FROM",
        ))

    from_table = None
    if d.from_tables:
        from_table = catalog.resolve_table(d.from_tables[0])
        if from_table is None:
            diags.append(Diagnostic(
                "MQL-015", f"unknown table {d.from_tables[0]!r}", clause="FROM",
            ))

    if from_table is not None and d.where is not None:
        _check_predicate(d.where, from_table, diags)

    over_table = None
    if d.over_table is not None:
        over_table = catalog.resolve_table(d.over_table)
        if over_table is None:
            diags.append(Diagnostic(
                "MQL-015", f"unknown table {d.over_table!r}", clause="OVER",
            ))

    if d.st_type == "ins":
        if from_table is not None:
            _check_inspect(d.statement, from_table, diags)
        return diags

    if d.supervision == "SUPERVISED" and d.ml_type == "clus":
        diags.append(Diagnostic(
            "MQL-108", "CLUSTER is unsupervised; AS SUPERVISED does not apply",
            clause="AS",
        ))
    if d.supervision == "UNSUPERVISED" and d.ml_type in ("pred", "class"):
        diags.append(Diagnostic(
            "MQL-108",
            f"{'PREDICTION' if d.ml_type == 'pred' else 'CLASSIFICATION'} is "
            "supervised; AS UNSUPERVISED does not apply",
            clause="AS",
        ))

    if d.model == "stored":
        if d.over_table is None:
            diags.append(Diagnostic(
                "MQL-113",
                "USING MODEL needs an OVER table to predict on",
                clause="OVER",
            ))
        manifest = catalog.model_manifest(d.mod_name)
        if manifest is None:
            diags.append(Diagnostic(
                "MQL-040", f"no stored model named {d.mod_name!r}", clause="USING",
            ))
        elif over_table is not None:
            for col_name, dtype in manifest["feature_schema"]:
                if not over_table.has_column(col_name):
                    diags.append(Diagnostic(
                        "MQL-107",
                        f"OVER table {d.over_table!r} lacks model feature "
                        f"{col_name!r}",
                        clause="OVER",
                    ))
                elif over_table.column(col_name).dtype != dtype:
                    diags.append(Diagnostic(
                        "MQL-107",
                        f"OVER column {col_name!r} is "
                        f"{over_table.column(col_name).dtype}, model expects {dtype}",
                        clause="OVER",
                    ))
        _check_labels(d, over_table, from_table, diags)
        return diags

    # custom / default / best: a construct will run, so the feature table
    # must type-check now (the no-implicit-INSPECT rule).
    if from_table is None:
        return diags

    class_column = None
    if d.ml_type == "class":
        class_column, err = infer_class_column(from_table, d.class_labels)
        if err == "unknown":
            diags.append(Diagnostic(
                "MQL-105",
                "no column's values contain all classification labels "
                f"{', '.join(d.class_labels)}",
                clause="INTO",
            ))
        elif err == "ambiguous":
            diags.append(Diagnostic(
                "MQL-106",
                "several columns could hold the classification labels; "
                "narrow FEATURES to disambiguate",
                clause="INTO",
            ))

    if d.ml_type == "pred":
        if not from_table.has_column(d.target):
            diags.append(Diagnostic(
                "MQL-103",
                f"prediction target {d.target!r} is not in table "
                f"{d.from_tables[0]!r}",
                clause="PREDICTION",
            ))
        else:
            if not isinstance(d.features, Star) and d.features and \
                    d.target in d.features:
                diags.append(Diagnostic(
                    "MQL-104",
                    f"target {d.target!r} may not appear among FEATURES",
                    clause="FEATURES",
                ))
            if from_table.column(d.target).dtype != NUMERIC:
                diags.append(Diagnostic(
                    "MQL-109",
                    f"prediction target {d.target!r} is categorical; "
                    "NUMERIZE or CATEGORIZE it with INSPECT first",
                    clause="PREDICTION",
                ))

    features = []
    if not isinstance(d.features, Star):
        for f in d.features or ():
            if not from_table.has_column(f):
                diags.append(Diagnostic(
                    "MQL-011",
                    f"unknown feature column {f!r} in table {d.from_tables[0]!r}",
                    clause="FEATURES",
                ))
            else:
                features.append(f)
        if d.ml_type == "pred" and d.target in features:
            features.remove(d.target)
    else:
        features = resolve_features(d, from_table, class_column)

    for f in features:
        if f == class_column:
            continue
        if from_table.column(f).dtype == CATEGORICAL:
            diags.append(Diagnostic(
                "MQL-109",
                f"feature {f!r} is categorical and the algorithms are "
                "numeric-only; apply INSPECT first (the program FAILs, "
                "wrangling is never implicit)",
                clause="FEATURES",
            ))

    if over_table is not None:
        for f in features:
            if f == class_column:
                continue
            if not over_table.has_column(f):
                diags.append(Diagnostic(
                    "MQL-034",
                    f"OVER table {d.over_table!r} lacks feature {f!r}",
                    clause="OVER",
                ))
            elif over_table.column(f).dtype != NUMERIC:
                diags.append(Diagnostic(
                    "MQL-034",
                    f"OVER column {f!r} must be numeric",
                    clause="OVER",
                ))

    _check_labels(d, over_table, from_table, diags)
    return diags


def _check_labels(d: Delta, over_table, from_table, diags) -> None:
    source = over_table if d.over_table is not None else from_table
    source_name = d.over_table if d.over_table is not None else (
        d.from_tables[0] if d.from_tables else None
    )
    if source is None:
        return
    for lb in d.label_columns:
        if not source.has_column(lb):
            diags.append(Diagnostic(
                "MQL-011",
                f"label column {lb!r} is not in table {source_name!r}",
                clause="LABEL",
            ))


def _check_predicate(where: Predicate, table: Table, diags) -> None:
    for comp in where.comparisons:
        if not table.has_column(comp.column):
            diags.append(Diagnostic(
                "MQL-011",
                f"unknown column {comp.column!r} in WHERE",
                clause="WHERE",
            ))
        elif (table.column(comp.column).dtype == CATEGORICAL
              and comp.op not in ("=", "<>")):
            diags.append(Diagnostic(
                "MQL-013",
                f"ordering comparison {comp.op!r} on categorical column "
                f"{comp.column!r}",
                clause="WHERE",
            ))


def _check_inspect(s: Inspect, table: Table, diags) -> None:
    for column, action in s.actions:
        if not table.has_column(column):
            diags.append(Diagnostic(
                "MQL-011",
                f"unknown column {column!r} in table {s.from_tables[0]!r}",
                clause="INSPECT",
            ))
            continue
        if isinstance(action, Categorize):
            if table.column(column).dtype != NUMERIC:
                diags.append(Diagnostic(
                    "MQL-020",
                    f"CATEGORIZE needs a numeric column; {column!r} is categorical",
                    clause="CATEGORIZE",
                ))
            if len(action.labels) < 2:
                diags.append(Diagnostic(
                    "MQL-021",
                    "CATEGORIZE INTO needs at least two labels",
                    clause="CATEGORIZE",
                ))
        if isinstance(action, Numerize):
            for ref in _column_refs(action.expr):
                if ref != column:
                    diags.append(Diagnostic(
                        "MQL-022",
                        f"NUMERIZE over {column!r} may only reference that "
                        f"column, found {ref!r}",
                        clause="NUMERIZE",
                    ))


def _column_refs(e: Expr) -> list[str]:
    if isinstance(e, ColRef):
        return [e.name]
    if isinstance(e, BinOp):
        return _column_refs(e.left) + _column_refs(e.right)
    if isinstance(e, Neg):
        return _column_refs(e.operand)
    if isinstance(e, Call):
        return _column_refs(e.arg)
    return []
