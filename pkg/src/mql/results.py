"""Labeled statement outputs, renderable as CSV, text table or plot."""

from __future__ import annotations

from dataclasses import dataclass

from .table import Cell, format_cell


@dataclass(frozen=True)
class ResultSet:
    outputs: tuple[Cell, ...]
    output_kind: str                     # prediction | class | cluster
    target_name: str
    source_statement: int = 0
    label_columns: tuple[str, ...] = ()
    labels: tuple[tuple[Cell, ...], ...] = ()   # one tuple per label column
    actuals: tuple[Cell, ...] | None = None

    def __post_init__(self):
        for col in self.labels:
            if len(col) != len(self.outputs):
                raise ValueError("label and output columns differ in length")
        if self.actuals is not None and len(self.actuals) != len(self.outputs):
            raise ValueError("actuals and outputs differ in length")

    @property
    def row_count(self) -> int:
        return len(self.outputs)

    def header(self) -> list[str]:
        names = list(self.label_columns) + [self.output_kind]
        if self.actuals is not None:
            names.append("actual")
        return names

    def rows(self) -> list[list[str]]:
        out = []
        for i in range(self.row_count):
            row = [format_cell(col[i]) for col in self.labels]
            row.append(format_cell(self._as_cell(self.outputs[i])))
            if self.actuals is not None:
                row.append(format_cell(self.actuals[i]))
            out.append(row)
        return out

    def _as_cell(self, value) -> Cell:
        if isinstance(value, int) and not isinstance(value, bool):
            return float(value)
        return value
