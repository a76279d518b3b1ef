"""Table wrangling: the four per-column INSPECT actions.

Actions run in the order listed; each produces a new table consumed by the
next.  The source table is never modified.
"""

from __future__ import annotations

from .errors import DomainError, EmptyColumn, NotNumeric, TooFewValues
from .exprs import eval_cell_expr
from .syntax.nodes import (
    Action,
    Categorize,
    Deduplicate,
    Impute,
    Inspect,
    Numerize,
)
from .table import CATEGORICAL, NUMERIC, Column, Table, column_stats


def inspect_execute(s: Inspect, table: Table, log_lines: list[str] | None = None) -> Table:
    """Apply every action of an INSPECT statement (WHERE already applied)."""
    out = table
    for column, action in s.actions:
        out.column(column)  # unknown columns fail before any work
        before = out.row_count
        out = apply_action(out, column, action)
        if log_lines is not None:
            name = type(action).__name__.lower() if action else "none"
            log_lines.append(
                f"{column}: {name} ({before} rows in, {out.row_count} rows out)"
            )
    return out


def apply_action(table: Table, column: str, action: Action | None) -> Table:
    if action is None:
        return table
    if isinstance(action, Categorize):
        return categorize(table, column, action.labels)
    if isinstance(action, Impute):
        return impute(table, column)
    if isinstance(action, Numerize):
        return numerize(table, column, action.expr)
    if isinstance(action, Deduplicate):
        return deduplicate(table, column)
    raise TypeError(f"not an action: {action!r}")


def categorize(table: Table, column: str, labels: tuple[str, ...]) -> Table:
    """Equal-frequency binning of a numeric column into the given labels.

    Bin edges sit at the j/x quantiles (linear interpolation); a cell gets
    the first label whose upper edge is >= the value.  Missing cells stay
    missing; the column becomes categorical.
    """
    col = table.column(column)
    if col.dtype != NUMERIC:
        raise NotNumeric(f"CATEGORIZE needs a numeric column; {column!r} is not")
    if len(labels) < 2:
        raise TooFewValues("CATEGORIZE INTO needs at least two labels")
    present = sorted(col.non_missing())
    if len(present) < len(labels):
        raise TooFewValues(
            f"column {column!r} has {len(present)} values for {len(labels)} bins"
        )
    edges = [_quantile(present, j / len(labels)) for j in range(1, len(labels))]
    cells = []
    for cell in col.cells:
        if cell is None:
            cells.append(None)
            continue
        for label, edge in zip(labels, edges):
            if cell <= edge:
                cells.append(label)
                break
        else:
            cells.append(labels[-1])
    return table.with_column(Column(column, CATEGORICAL, tuple(cells)))


def _quantile(ordered: list[float], q: float) -> float:
    """Linear-interpolation quantile of an already sorted list."""
    pos = q * (len(ordered) - 1)
    lo = int(pos)
    hi = min(lo + 1, len(ordered) - 1)
    frac = pos - lo
    return ordered[lo] * (1 - frac) + ordered[hi] * frac


def impute(table: Table, column: str) -> Table:
    """Fill missing cells with the median (numeric) or mode (categorical)."""
    col = table.column(column)
    if not col.non_missing():
        raise EmptyColumn(f"cannot impute column {column!r}: all cells missing")
    if col.missing_count == 0:
        return table
    stats = column_stats(table, column)
    fill = stats.median if col.dtype == NUMERIC else stats.mode
    cells = tuple(fill if c is None else c for c in col.cells)
    return table.with_column(Column(column, col.dtype, cells))


def numerize(table: Table, column: str, expr) -> Table:
    """Replace every non-missing cell with the expression's value at it."""
    col = table.column(column)
    cells = []
    for i, cell in enumerate(col.cells):
        if cell is None:
            cells.append(None)
            continue
        try:
            cells.append(float(eval_cell_expr(expr, column, cell)))
        except DomainError as e:
            raise DomainError(f"{e.message} (column {column!r}, row {i + 1})") from None
    return table.with_column(Column(column, NUMERIC, tuple(cells)))


def deduplicate(table: Table, column: str) -> Table:
    """Drop repeated rows (whole-row identity), keeping first occurrences.

    The column the action is attached to only anchors the syntax; rows are
    compared over the full tuple.
    """
    seen = set()
    keep = []
    for i in range(table.row_count):
        row = table.row(i)
        if row not in seen:
            seen.add(row)
            keep.append(i)
    return table.take_rows(keep)
