"""Canonical MQL text for parsed statements.

``parse_program(pretty_print(s))`` yields a statement equal to ``s``.
"""

from __future__ import annotations

import re

from .lexer import KEYWORDS
from .nodes import (
    BinOp,
    Call,
    Categorize,
    Classification,
    Cluster,
    ColRef,
    Comparison,
    Construct,
    CountStar,
    Deduplicate,
    Expr,
    Generate,
    Impute,
    Inspect,
    Neg,
    Num,
    Numerize,
    Predicate,
    Prediction,
    Star,
    Statement,
)

_PLAIN_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")
_DOTTED_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*(\.[A-Za-z_][A-Za-z0-9_]*)*$")


def pretty_print(s: Statement) -> str:
    if isinstance(s, Generate):
        return _generate(s)
    if isinstance(s, Construct):
        return _construct(s)
    if isinstance(s, Inspect):
        return _inspect(s)
    raise TypeError(f"not a statement: {s!r}")


def print_program(statements: list[Statement]) -> str:
    return ";\n\n".join(pretty_print(s) for s in statements) + ";\n"


def _generate(s: Generate) -> str:
    lines = ["GENERATE DISPLAY OF" if s.display else "GENERATE"]
    lines.append(_task_head(s.task, s.over))
    if s.model_name is not None:
        lines.append(f"USING MODEL {_ident(s.model_name)}")
    elif s.algorithm is not None:
        lines.append(f"USING ALGORITHM {_ident(s.algorithm)}")
    if s.accuracy is not None:
        lines.append(f"WITH MODEL ACCURACY {_num(s.accuracy)}")
    if s.labels:
        lines.append("LABEL " + _names(s.labels))
    if s.features is not None:
        lines.append("FEATURES " + _features(s.features))
        lines.append("FROM " + ", ".join(_table(t) for t in s.from_tables))
    if s.where is not None:
        lines.append("WHERE " + _predicate(s.where))
    return "\n".join(lines)


def _construct(s: Construct) -> str:
    head = f"CONSTRUCT {_ident(s.model_name)}"
    if s.supervision:
        head += f" AS {s.supervision}"
    lines = [head, "FOR " + _task_head(s.task, None)]
    if s.algorithm is not None:
        lines.append(f"USING {_ident(s.algorithm)}")
    if s.accuracy is not None:
        lines.append(f"WITH MODEL ACCURACY {_num(s.accuracy)}")
    lines.append(f"TRAIN ON {_expr(s.train_n)} TEST ON {_expr(s.test_m)}")
    lines.append("FEATURES " + _features(s.features))
    lines.append("FROM " + ", ".join(_table(t) for t in s.from_tables))
    if s.where is not None:
        lines.append("WHERE " + _predicate(s.where))
    return "\n".join(lines)


def _inspect(s: Inspect) -> str:
    entries = []
    for column, action in s.actions:
        text = _ident(column)
        if isinstance(action, Categorize):
            text += " CATEGORIZE INTO " + ", ".join(_label(x) for x in action.labels)
        elif isinstance(action, Impute):
            text += " IMPUTE"
        elif isinstance(action, Numerize):
            text += " NUMERIZE AS " + _expr(action.expr)
        elif isinstance(action, Deduplicate):
            text += " DEDUPLICATE"
        entries.append(text)
    lines = ["INSPECT " + ", ".join(entries)]
    lines.append("FROM " + ", ".join(_table(t) for t in s.from_tables))
    if s.where is not None:
        lines.append("WHERE " + _predicate(s.where))
    return "\n".join(lines)


def _task_head(task, over: str | None) -> str:
    if isinstance(task, Prediction):
        text = f"PREDICTION {_ident(task.target)}"
    elif isinstance(task, Classification):
        text = "CLASSIFICATION INTO " + ", ".join(_label(x) for x in task.labels)
    elif isinstance(task, Cluster):
        return f"CLUSTER OF {_expr(task.k)}"
    else:
        raise TypeError(f"not a task head: {task!r}")
    if over is not None:
        text += f" OVER {_table(over)}"
    return text


def _ident(name: str) -> str:
    if name.upper() in KEYWORDS or not _PLAIN_IDENT.match(name):
        return '"' + name.replace('"', '""') + '"'
    return name


def _table(name: str) -> str:
    if _DOTTED_NAME.match(name) and all(
        part.upper() not in KEYWORDS for part in name.split(".")
    ):
        return name
    return '"' + name.replace('"', '""') + '"'


def _label(value: str) -> str:
    if _PLAIN_IDENT.match(value) and value.upper() not in KEYWORDS:
        return value
    return "'" + value.replace("'", "''") + "'"


def _names(names) -> str:
    return ", ".join(_ident(n) for n in names)


def _features(features) -> str:
    if isinstance(features, Star):
        return "*"
    return _names(features)


def _num(value: float) -> str:
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def _predicate(p: Predicate) -> str:
    return " AND ".join(_comparison(c) for c in p.comparisons)


def _comparison(c: Comparison) -> str:
    if isinstance(c.value, str):
        literal = "'" + c.value.replace("'", "''") + "'"
    else:
        literal = _num(c.value)
    return f"{_ident(c.column)} {c.op} {literal}"


def _expr(e: Expr, parent_prec: int = 0) -> str:
    if isinstance(e, Num):
        return _num(e.value)
    if isinstance(e, ColRef):
        return _ident(e.name)
    if isinstance(e, CountStar):
        return "COUNT(*)"
    if isinstance(e, Call):
        return f"{e.func}({_expr(e.arg)})"
    if isinstance(e, Neg):
        inner = _expr(e.operand, 3)
        if inner.startswith("-"):
            inner = f"({inner})"  # adjacent minuses would lex as a comment
        return "-" + inner
    if isinstance(e, BinOp):
        prec = 1 if e.op in "+-" else 2
        # Right operand is parenthesized at equal precedence: the grammar is
        # left-associative, so a right-nested tree needs the parentheses.
        text = (
            f"{_expr(e.left, prec)} {e.op} {_expr(e.right, prec + 1)}"
        )
        if prec < parent_prec:
            return f"({text})"
        return text
    raise TypeError(f"not an expression: {e!r}")
