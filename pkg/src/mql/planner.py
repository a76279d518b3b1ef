"""Program execution: statement dispatch, model construction, generation.

Statements run in order; the first failing diagnostic aborts the rest of
the program while keeping earlier outputs.  GENERATE without a stored
model silently constructs a transient one, uses it and discards it; a
CONSTRUCT that would need wrangling fails instead of wrangling implicitly.
"""

from __future__ import annotations

import dataclasses
import json
import logging
import math
import os
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone

from . import display
from .analyzer import Delta, Diagnostic, gather, infer_class_column, resolve_features, validate
from .errors import (
    AccuracyBelowThreshold,
    BestBelowThreshold,
    MqlError,
    SchemaMismatch,
)
from .exprs import eval_int_expr
from .learn import (
    default_for,
    evaluate,
    lookup,
    predict,
    sweep_for,
    train_test_split,
)
from .learn.model import Model
from .learn.registry import fit as registry_fit
from .results import ResultSet
from .store import load_model, save_model
from .syntax.nodes import Statement
from .table import (
    NUMERIC,
    Column,
    Table,
    apply_where,
    load_csv,
    parse_numeric,
    select_columns,
    write_csv,
)
from .wrangler import inspect_execute

log = logging.getLogger("mql")

TRAIN_FRACTION = 0.8


@dataclass
class Session:
    """Execution context: directories, seed, policies, live table bindings."""

    data_dir: str = "."
    out_dir: str = "./mql-out"
    store_dir: str = "./mql-models"
    seed: int = 42
    missing_policy: str = "zero"       # zero | impute
    backend: str = "native"            # native | emit
    bindings: dict[str, Table] = field(default_factory=dict)
    emitted_bindings: dict[str, str] = field(default_factory=dict)
    artifacts: list[str] = field(default_factory=list)
    statements_run: int = 0
    _cache: dict[str, Table] = field(default_factory=dict)

    # Session doubles as the validation catalog.

    def resolve_table(self, name: str) -> Table | None:
        if name in self.bindings:
            return self.bindings[name]
        path = self._disk_path(name)
        if path is None:
            return None
        if path not in self._cache:
            self._cache[path] = load_csv(path, name=name)
        return self._cache[path]

    def resolve_path(self, name: str) -> str | None:
        """Path a backend script should read; honors emitted INSPECT outputs."""
        if name in self.emitted_bindings:
            return self.emitted_bindings[name]
        return self._disk_path(name)

    def _disk_path(self, name: str) -> str | None:
        for candidate in (
            os.path.join(self.data_dir, name + ".csv"),
            os.path.join(self.data_dir, name),
            name,
        ):
            if os.path.isfile(candidate):
                return candidate
        return None

    def model_manifest(self, name: str) -> dict | None:
        path = os.path.join(self.store_dir, name, "manifest.json")
        if not os.path.isfile(path):
            return None
        try:
            with open(path, "r", encoding="utf-8") as fh:
                return json.load(fh)
        except (OSError, json.JSONDecodeError):
            return None

    def timestamp(self) -> str:
        epoch = os.environ.get("SOURCE_DATE_EPOCH")
        moment = float(epoch) if epoch else time.time()
        return datetime.fromtimestamp(moment, timezone.utc).strftime(
            "%Y-%m-%dT%H:%M:%SZ"
        )

    def out_path(self, filename: str) -> str:
        os.makedirs(self.out_dir, exist_ok=True)
        return os.path.join(self.out_dir, filename)

    def record(self, path: str) -> None:
        self.artifacts.append(path)


def run_program(statements: list[Statement], session: Session) -> list:
    """Execute (or emit) every statement; outputs in statement order."""
    from .emitter import emit_script  # local import to avoid a cycle

    results: list = []
    for statement in statements:
        session.statements_run += 1
        index = session.statements_run
        try:
            delta = gather(statement)
        except MqlError as e:
            results.append(Diagnostic(e.code, e.message, statement_index=index))
            break
        diags = validate(delta, session)
        if diags:
            results.extend(
                dataclasses.replace(d, statement_index=index) for d in diags
            )
            break
        try:
            if session.backend == "emit":
                results.append(emit_script(delta, session, index))
            elif delta.st_type == "ins":
                results.append(execute_inspect(delta, session, index))
            elif delta.st_type == "con":
                results.append(execute_construct(delta, session, index))
            else:
                results.append(execute_generate(delta, session, index))
        except MqlError as e:
            results.append(Diagnostic(e.code, e.message, statement_index=index))
            break
        except OSError as e:
            results.append(Diagnostic("MQL-090", str(e), statement_index=index))
            break
    return results


# --- INSPECT -----------------------------------------------------------------

def execute_inspect(d: Delta, session: Session, index: int) -> Table:
    source = session.resolve_table(d.from_tables[0])
    filtered = apply_where(source, d.where)
    log_lines: list[str] = []
    out = inspect_execute(d.statement, filtered, log_lines)
    out = Table(d.from_tables[0], out.columns)
    session.bindings[d.from_tables[0]] = out

    safe = d.from_tables[0].replace(os.sep, "_").replace("/", "_")
    csv_path = session.out_path(f"{safe}.inspected.csv")
    write_csv(out, csv_path)
    session.record(csv_path)
    log_path = session.out_path(f"{safe}.wrangle.log")
    with open(log_path, "w", encoding="utf-8") as fh:
        fh.write(f"table: {d.from_tables[0]}\n")
        for line in log_lines:
            fh.write(line + "\n")
    session.record(log_path)
    return out


# --- CONSTRUCT ------------------------------------------------------------------

def execute_construct(
    d: Delta, session: Session, index: int, transient: bool = False
) -> Model:
    model, _, _, _ = _construct_model(d, session, index, transient)
    return model


def _construct_model(d: Delta, session: Session, index: int, transient: bool):
    source = session.resolve_table(d.from_tables[0])
    filtered = apply_where(source, d.where)
    count_star = filtered.row_count

    class_column = None
    if d.ml_type == "class":
        class_column, _ = infer_class_column(filtered, d.class_labels)
    features = resolve_features(d, filtered, class_column)

    target = d.target if d.ml_type == "pred" else class_column
    keep = list(features)
    if target is not None:
        keep.append(target)
    label_columns = [
        c for c in d.label_columns if filtered.has_column(c) and c not in keep
    ]
    assembled = select_columns(filtered, keep + label_columns)

    if d.ml_type == "class":
        assembled = _filter_class_rows(assembled, class_column, d.class_labels)

    required = features + ([target] if target else [])
    assembled, dropped = _drop_missing(assembled, required)
    if dropped:
        log.info(
            "dropped %d row(s) with missing cells before training", dropped
        )

    rows = assembled.row_count
    if d.train_n is not None:
        n = eval_int_expr(d.train_n, count_star)
        m = eval_int_expr(d.test_m, count_star)
    else:
        n = math.ceil(TRAIN_FRACTION * rows)
        m = rows - n
    train, test = train_test_split(assembled, n, m, session.seed)

    k = None
    if d.ml_type == "clus":
        k = eval_int_expr(d.k_expr, count_star)

    name = d.mod_name if d.mod_name else "transient"
    if d.model == "best":
        model, scores = _best_sweep(d, train, test, features, target, k, session, name)
        log.info(
            "best-mode sweep scores: %s",
            ", ".join(f"{a}={s:.6f}" for a, s in scores.items()),
        )
    else:
        if d.model == "custom":
            spec = lookup(d.alg_name, d.ml_type)
        else:
            spec = default_for(d.ml_type)
        model = registry_fit(
            spec, train, target, features, d.ml_type, k, session.seed, name
        )
        _attach_metrics(model, train, test)
        if d.accuracy is not None and model.score() < d.accuracy:
            raise AccuracyBelowThreshold(
                f"model scored {model.score():.6f}, below the required "
                f"accuracy {d.accuracy}"
            )

    model.created_at = session.timestamp()
    if not transient:
        path = save_model(model, session.store_dir)
        session.record(os.path.join(path, "manifest.json"))
        session.record(os.path.join(path, "params.json"))
    return model, train, test, class_column


def _best_sweep(d, train, test, features, target, k, session, name):
    candidates = sweep_for(d.ml_type)
    fitted: list[Model] = []
    scores: dict[str, float] = {}
    for spec in candidates:
        model = registry_fit(
            spec, train, target, features, d.ml_type, k, session.seed, name
        )
        _attach_metrics(model, train, test)
        fitted.append(model)
        scores[spec.name] = model.score()
    best = max(fitted, key=lambda m: m.score())  # ties keep registry order
    if d.accuracy is not None and best.score() < d.accuracy:
        listing = ", ".join(f"{a}={s:.6f}" for a, s in scores.items())
        raise BestBelowThreshold(
            f"no model reached accuracy {d.accuracy}; scores: {listing}",
            scores,
        )
    return best, scores


def _attach_metrics(model: Model, train: Table, test: Table) -> None:
    model.train_metrics = evaluate(model, train)
    model.test_metrics = evaluate(model, test) if test.row_count else None


def _filter_class_rows(t: Table, class_column: str, labels: tuple[str, ...]) -> Table:
    """Keep rows whose class value is one of the declared labels."""
    col = t.column(class_column)
    if col.dtype == NUMERIC:
        wanted = {parse_numeric(lb) for lb in labels}
    else:
        wanted = set(labels)
    keep = [i for i, cell in enumerate(col.cells) if cell in wanted]
    return t.take_rows(keep)


def _drop_missing(t: Table, required: list[str]) -> tuple[Table, int]:
    cols = [t.column(name) for name in required]
    keep = [
        i for i in range(t.row_count)
        if all(c.cells[i] is not None for c in cols)
    ]
    return t.take_rows(keep), t.row_count - len(keep)


# --- GENERATE --------------------------------------------------------------------

def execute_generate(d: Delta, session: Session, index: int) -> ResultSet:
    if d.model == "stored":
        model = load_model(d.mod_name, session.store_dir)
        if d.accuracy is not None and model.score() < d.accuracy:
            raise AccuracyBelowThreshold(
                f"stored model {d.mod_name!r} scored {model.score():.6f}, "
                f"below the required accuracy {d.accuracy}"
            )
        train = test = None
    else:
        model, train, test, _ = _construct_model(d, session, index, transient=True)

    if d.over_table is not None:
        over = session.resolve_table(d.over_table)
        resolved = _resolve_missing(over, model, session.missing_policy)
        outputs = predict(model, resolved)
        label_values = tuple(
            over.column(name).cells for name in d.label_columns
        )
        actuals = _over_actuals(over, model)
        result = ResultSet(
            outputs=tuple(outputs),
            output_kind=_output_kind(d.ml_type),
            target_name=model.target_name or "cluster",
            source_statement=index,
            label_columns=d.label_columns,
            labels=label_values,
            actuals=actuals,
        )
        plot_table = resolved
    else:
        if test is None:  # stored + no OVER; validate rejects this upstream
            raise SchemaMismatch("USING MODEL needs an OVER table to predict on")
        report = test if test.row_count else train
        outputs = predict(model, report)
        label_values = tuple(
            report.column(name).cells for name in d.label_columns
        )
        actuals = None
        if d.ml_type in ("pred", "class") and model.target_name:
            actuals = tuple(report.column(model.target_name).cells)
        result = ResultSet(
            outputs=tuple(outputs),
            output_kind=_output_kind(d.ml_type),
            target_name=model.target_name or "cluster",
            source_statement=index,
            label_columns=d.label_columns,
            labels=label_values,
            actuals=actuals,
        )
        plot_table = report

    _write_result(result, session, index)
    if d.display:
        _write_plots(d, result, plot_table, model, session, index)
    return result


def _output_kind(ml_type: str) -> str:
    return {"pred": "prediction", "class": "class", "clus": "cluster"}[ml_type]


def _resolve_missing(over: Table, model: Model, policy: str) -> Table:
    """Fill missing feature cells: zeros, or the model's training medians."""
    medians = model.params.get("feature_medians", [])
    out = over
    for j, (name, _) in enumerate(model.feature_schema):
        col = out.column(name)
        if col.missing_count == 0:
            continue
        fill = 0.0 if policy == "zero" else float(medians[j])
        cells = tuple(fill if c is None else c for c in col.cells)
        out = out.with_column(Column(name, col.dtype, cells))
    return out


def _over_actuals(over: Table, model: Model):
    if model.ml_type not in ("pred", "class") or not model.target_name:
        return None
    if not over.has_column(model.target_name):
        return None
    col = over.column(model.target_name)
    if col.missing_count:
        return None
    return tuple(col.cells)


def _write_result(result: ResultSet, session: Session, index: int) -> None:
    path = session.out_path(f"stmt{index:02d}_result.csv")
    columns = []
    for name, values in zip(result.label_columns, result.labels):
        dtype = NUMERIC if all(
            isinstance(v, float) or v is None for v in values
        ) else "categorical"
        columns.append(Column(name, dtype, values))
    out_cells = tuple(
        float(v) if isinstance(v, int) else v for v in result.outputs
    )
    out_dtype = NUMERIC if all(isinstance(v, float) for v in out_cells) else "categorical"
    columns.append(Column(result.output_kind, out_dtype, out_cells))
    if result.actuals is not None:
        dtype = NUMERIC if all(
            isinstance(v, float) or v is None for v in result.actuals
        ) else "categorical"
        columns.append(Column("actual", dtype, result.actuals))
    write_csv(Table("result", tuple(columns)), path)
    session.record(path)


def _write_plots(
    d: Delta, result: ResultSet, plot_table: Table, model: Model,
    session: Session, index: int,
) -> None:
    if d.ml_type == "pred":
        if d.over_table is not None:
            path = session.out_path(f"stmt{index:02d}_bar.svg")
            svg = display.render_bar(result)
        else:
            path = session.out_path(f"stmt{index:02d}_scatter.svg")
            svg = display.render_scatter(result)
    elif d.ml_type == "class":
        path = session.out_path(f"stmt{index:02d}_bar.svg")
        svg = display.render_class_bar(result)
    else:
        path = session.out_path(f"stmt{index:02d}_clusters.svg")
        feature_table = select_columns(plot_table, model.feature_names)
        centroids = [
            row[:2] for row in model.params.get("centroids_original", [])
        ]
        svg = display.render_clusters(result, feature_table, centroids)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(svg)
    session.record(path)
