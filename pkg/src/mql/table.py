"""Immutable typed columnar tables over CSV files.

A :class:`Table` is the one value every statement consumes and produces.
Columns are typed ``numeric`` or ``categorical`` at load time; missing cells
are represented by ``None``.  All operations return new tables.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

from .errors import (
    DuplicateColumn,
    EmptyColumn,
    FormatError,
    TypeMismatch,
    UnknownColumn,
)

NUMERIC = "numeric"
CATEGORICAL = "categorical"

#: CSV tokens read as a missing cell (case-insensitive).
MISSING_TOKENS = frozenset({"", "-", "na", "nan"})

Cell = float | str | None


def parse_numeric(token: str) -> float | None:
    """Return the finite float value of ``token``, or None if it has none."""
    try:
        value = float(token)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


def format_cell(value: Cell) -> str:
    """Canonical CSV text for a cell; missing cells become the empty string."""
    if value is None:
        return ""
    if isinstance(value, float):
        if value == int(value) and abs(value) < 1e16:
            return str(int(value))
        return repr(value)
    return value


@dataclass(frozen=True)
class Column:
    name: str
    dtype: str  # NUMERIC or CATEGORICAL
    cells: tuple[Cell, ...]

    def non_missing(self) -> list:
        return [c for c in self.cells if c is not None]

    @property
    def missing_count(self) -> int:
        return sum(1 for c in self.cells if c is None)


@dataclass(frozen=True)
class ColumnStats:
    median: float | None
    mode: Cell
    distinct: frozenset
    missing_count: int


@dataclass(frozen=True)
class Table:
    name: str
    columns: tuple[Column, ...] = field(default_factory=tuple)

    def __post_init__(self):
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise DuplicateColumn(f"duplicate column names in table {self.name!r}")
        lengths = {len(c.cells) for c in self.columns}
        if len(lengths) > 1:
            raise FormatError(f"columns of table {self.name!r} differ in length")

    @property
    def row_count(self) -> int:
        return len(self.columns[0].cells) if self.columns else 0

    @property
    def column_names(self) -> list[str]:
        return [c.name for c in self.columns]

    def column(self, name: str) -> Column:
        for c in self.columns:
            if c.name == name:
                return c
        raise UnknownColumn(f"no column {name!r} in table {self.name!r}")

    def has_column(self, name: str) -> bool:
        return any(c.name == name for c in self.columns)

    def row(self, i: int) -> tuple[Cell, ...]:
        return tuple(c.cells[i] for c in self.columns)

    def rows(self) -> list[tuple[Cell, ...]]:
        return [self.row(i) for i in range(self.row_count)]

    def take_rows(self, indices: list[int], name: str | None = None) -> "Table":
        """New table holding the given rows, in the given order."""
        cols = tuple(
            Column(c.name, c.dtype, tuple(c.cells[i] for i in indices))
            for c in self.columns
        )
        return Table(name if name is not None else self.name, cols)

    def with_column(self, col: Column) -> "Table":
        """Replace the same-named column, preserving column order."""
        if not self.has_column(col.name):
            raise UnknownColumn(f"no column {col.name!r} in table {self.name!r}")
        cols = tuple(col if c.name == col.name else c for c in self.columns)
        return Table(self.name, cols)


def _infer_column(name: str, tokens: list[str]) -> Column:
    """Type a raw CSV column: numeric iff every non-missing token parses finite."""
    parsed: list[Cell] = []
    numeric = True
    for tok in tokens:
        if tok.strip().lower() in MISSING_TOKENS:
            parsed.append(None)
        elif numeric and (value := parse_numeric(tok)) is not None:
            parsed.append(value)
        else:
            numeric = False
            break
    if numeric:
        return Column(name, NUMERIC, tuple(parsed))
    cells = tuple(
        None if tok.strip().lower() in MISSING_TOKENS else tok for tok in tokens
    )
    return Column(name, CATEGORICAL, cells)


def load_csv(path: str, name: str | None = None) -> Table:
    """Load an RFC-4180 CSV with a mandatory header row.

    Raises OSError for unreadable files and FormatError for ragged rows or
    duplicate headers.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError(f"{path}: empty file, header row required") from None
        if len(set(header)) != len(header):
            raise FormatError(f"{path}: duplicate header names")
        raw_columns: list[list[str]] = [[] for _ in header]
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue  # blank line
            if len(row) != len(header):
                raise FormatError(
                    f"{path}: row at line {lineno} has {len(row)} fields, "
                    f"expected {len(header)}"
                )
            for i, tok in enumerate(row):
                raw_columns[i].append(tok)
    table_name = name if name is not None else path
    columns = tuple(_infer_column(h, col) for h, col in zip(header, raw_columns))
    return Table(table_name, columns)


def write_csv(t: Table, path: str) -> None:
    """Write ``t`` with a header row, LF line endings, missing cells empty."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(t.column_names)
        for i in range(t.row_count):
            row = [format_cell(c.cells[i]) for c in t.columns]
            if row == [""]:
                fh.write('""\n')  # a bare newline would read as no row at all
            else:
                writer.writerow(row)


def apply_where(t: Table, predicate) -> Table:
    """Keep rows satisfying a conjunction of comparisons.

    ``predicate`` is a :class:`mql.syntax.nodes.Predicate` (or None for the
    identity).  Rows with a missing cell in any compared column are excluded.
    """
    if predicate is None or not predicate.comparisons:
        return t
    cols = []
    for comp in predicate.comparisons:
        col = t.column(comp.column)
        if col.dtype == CATEGORICAL and comp.op not in ("=", "<>"):
            raise TypeMismatch(
                f"ordering comparison {comp.op!r} on categorical column {comp.column!r}"
            )
        cols.append(col)
    keep = []
    for i in range(t.row_count):
        ok = True
        for comp, col in zip(predicate.comparisons, cols):
            cell = col.cells[i]
            if cell is None:
                ok = False
                break
            if not _compare(cell, comp.op, comp.value, col.dtype):
                ok = False
                break
        if ok:
            keep.append(i)
    return t.take_rows(keep)


def _compare(cell, op: str, literal, dtype: str) -> bool:
    if dtype == CATEGORICAL:
        lit = literal if isinstance(literal, str) else format_cell(float(literal))
        if op == "=":
            return cell == lit
        return cell != lit
    if isinstance(literal, str):
        return False  # string literal never matches a numeric column
    if op == "=":
        return cell == literal
    if op == "<>":
        return cell != literal
    if op == "<":
        return cell < literal
    if op == "<=":
        return cell <= literal
    if op == ">":
        return cell > literal
    return cell >= literal


def select_columns(t: Table, names: list[str]) -> Table:
    """Project onto the named columns, in the given order."""
    if len(set(names)) != len(names):
        dupes = sorted({n for n in names if names.count(n) > 1})
        raise DuplicateColumn(f"column(s) {', '.join(dupes)} listed more than once")
    return Table(t.name, tuple(t.column(n) for n in names))


def column_stats(t: Table, name: str) -> ColumnStats:
    """Median, mode, distinct values and missing count of one column.

    Median is None for categorical columns; mode ties break to the smallest
    value (numeric order for numbers, lexicographic for tokens).
    """
    col = t.column(name)
    present = col.non_missing()
    if not present:
        raise EmptyColumn(f"column {name!r} has no non-missing cells")
    median = None
    if col.dtype == NUMERIC:
        ordered = sorted(present)
        mid = len(ordered) // 2
        if len(ordered) % 2:
            median = ordered[mid]
        else:
            median = (ordered[mid - 1] + ordered[mid]) / 2.0
    counts: dict = {}
    for v in present:
        counts[v] = counts.get(v, 0) + 1
    mode = min(counts, key=lambda v: (-counts[v], v))
    return ColumnStats(
        median=median,
        mode=mode,
        distinct=frozenset(counts),
        missing_count=col.missing_count,
    )
