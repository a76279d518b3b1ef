"""MQL: a declarative machine-learning query engine over CSV tables.

Three statements drive everything: GENERATE runs an ML task (prediction,
classification or clustering), CONSTRUCT builds and stores a named model,
INSPECT wrangles a table.  Programs execute natively or are emitted as
backend ML-framework scripts.
"""

from .analyzer import Delta, Diagnostic, gather, normalize_accuracy, validate
from .errors import MqlError
from .learn import Model, train_test_split
from .planner import Session, run_program
from .results import ResultSet
from .store import delete_model, list_models, load_model, save_model
from .syntax import parse_program, parse_statement, pretty_print
from .table import Table, apply_where, column_stats, load_csv, select_columns, write_csv

__version__ = "0.1.0"

__all__ = [
    "Delta", "Diagnostic", "Model", "MqlError", "ResultSet", "Session",
    "Table", "apply_where", "column_stats", "delete_model", "gather",
    "list_models", "load_csv", "load_model", "normalize_accuracy",
    "parse_program", "parse_statement", "pretty_print", "run_program",
    "save_model", "select_columns", "train_test_split", "validate",
    "write_csv",
]
