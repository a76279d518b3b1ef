"""Exception hierarchy shared by every engine layer.

Each error carries a stable machine-readable code (``MQL-xxx``) so the
planner can turn any failure into a diagnostic line without knowing which
layer raised it.
"""

from __future__ import annotations


class MqlError(Exception):
    """Base class for all engine errors."""

    code = "MQL-000"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


# --- source text ----------------------------------------------------------

class LexError(MqlError):
    code = "MQL-001"

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ParseError(MqlError):
    code = "MQL-002"


class ExclusivityError(ParseError):
    """USING MODEL and ALGORITHM given together."""

    code = "MQL-003"


class MissingClauseError(ParseError):
    """A clause the statement form requires is absent (e.g. FROM)."""

    code = "MQL-004"


# --- tables ----------------------------------------------------------------

class FormatError(MqlError):
    """Malformed CSV: ragged rows or duplicate headers."""

    code = "MQL-010"


class UnknownColumn(MqlError):
    code = "MQL-011"


class DuplicateColumn(MqlError):
    code = "MQL-012"


class TypeMismatch(MqlError):
    """Ordering comparison against a categorical column."""

    code = "MQL-013"


class EmptyColumn(MqlError):
    """Statistic requested on a column with no non-missing cells."""

    code = "MQL-014"


class UnknownTable(MqlError):
    code = "MQL-015"


# --- wrangling --------------------------------------------------------------

class NotNumeric(MqlError):
    code = "MQL-020"


class TooFewValues(MqlError):
    code = "MQL-021"


class DomainError(MqlError):
    """Expression undefined on a cell value (e.g. log of a non-positive)."""

    code = "MQL-022"


class RangeError(MqlError):
    code = "MQL-023"


# --- learning ----------------------------------------------------------------

class TrainTooLarge(MqlError):
    code = "MQL-030"


class DegenerateDesign(MqlError):
    code = "MQL-031"


class KTooLarge(MqlError):
    code = "MQL-032"


class KExceedsRows(MqlError):
    code = "MQL-033"


class SchemaMismatch(MqlError):
    code = "MQL-034"


class EmptyTestSet(MqlError):
    code = "MQL-035"


class UnknownAlgorithm(MqlError):
    code = "MQL-036"


class BestBelowThreshold(MqlError):
    def __init__(self, message: str, scores: dict[str, float]):
        super().__init__(message)
        self.scores = scores

    code = "MQL-037"


class AccuracyBelowThreshold(MqlError):
    code = "MQL-038"


# --- model store -------------------------------------------------------------

class UnknownModel(MqlError):
    code = "MQL-040"


class NameCollision(MqlError):
    code = "MQL-041"


class CorruptManifest(MqlError):
    code = "MQL-042"


# --- rendering / emission ------------------------------------------------------

class EmptyResult(MqlError):
    code = "MQL-050"


class MissingActuals(MqlError):
    code = "MQL-051"


class TooFewFeatures(MqlError):
    code = "MQL-052"


class UnsupportedForEmission(MqlError):
    code = "MQL-053"
