"""Evaluation of scalar expressions from TRAIN/TEST counts and NUMERIZE."""

from __future__ import annotations

import math

from .errors import DomainError, NotNumeric
from .syntax.nodes import BinOp, Call, ColRef, CountStar, Expr, Neg, Num

_FUNCS = {
    "log": math.log,
    "log10": math.log10,
    "exp": math.exp,
    "abs": abs,
    "sqrt": math.sqrt,
}


def eval_cell_expr(e: Expr, column: str, value) -> float:
    """Evaluate a NUMERIZE expression with ``column`` bound to ``value``."""
    if isinstance(e, Num):
        return e.value
    if isinstance(e, ColRef):
        if e.name != column:
            raise DomainError(
                f"NUMERIZE over {column!r} may not reference {e.name!r}"
            )
        if not isinstance(value, float):
            raise NotNumeric(
                f"cell {value!r} in column {column!r} is not numeric"
            )
        return value
    if isinstance(e, Neg):
        return -eval_cell_expr(e.operand, column, value)
    if isinstance(e, BinOp):
        left = eval_cell_expr(e.left, column, value)
        right = eval_cell_expr(e.right, column, value)
        try:
            result = _apply(e.op, left, right)
        except ZeroDivisionError:
            raise DomainError("division by zero") from None
        return result
    if isinstance(e, Call):
        arg = eval_cell_expr(e.arg, column, value)
        if e.func in ("log", "log10") and arg <= 0:
            raise DomainError(f"{e.func} of non-positive value {arg}")
        if e.func == "sqrt" and arg < 0:
            raise DomainError(f"sqrt of negative value {arg}")
        return _FUNCS[e.func](arg)
    raise TypeError(f"not a cell expression: {e!r}")


def eval_int_expr(e: Expr, count_star: int) -> int:
    """Evaluate a TRAIN/TEST/CLUSTER count; ``/`` is integer division."""
    value = _eval_int(e, count_star)
    return int(value)


def _eval_int(e: Expr, count_star: int) -> int:
    if isinstance(e, Num):
        if e.value != int(e.value):
            raise DomainError(f"count expressions must be integral, got {e.value}")
        return int(e.value)
    if isinstance(e, CountStar):
        return count_star
    if isinstance(e, Neg):
        return -_eval_int(e.operand, count_star)
    if isinstance(e, BinOp):
        left = _eval_int(e.left, count_star)
        right = _eval_int(e.right, count_star)
        if e.op == "/":
            if right == 0:
                raise DomainError("division by zero in count expression")
            return left // right
        return int(_apply(e.op, left, right))
    raise DomainError(f"expression not allowed in a count: {e!r}")


def _apply(op: str, left, right):
    if op == "+":
        return left + right
    if op == "-":
        return left - right
    if op == "*":
        return left * right
    if op == "/":
        return left / right
    raise ValueError(f"unknown operator {op!r}")
