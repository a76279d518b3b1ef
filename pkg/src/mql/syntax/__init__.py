"""MQL source syntax: tokenizer, parser, AST nodes, pretty printer."""

from .lexer import Token, tokenize
from .nodes import (
    STAR,
    Action,
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
from .parser import parse_program, parse_statement
from .printer import pretty_print, print_program

__all__ = [
    "STAR", "Action", "BinOp", "Call", "Categorize", "Classification",
    "Cluster", "ColRef", "Comparison", "Construct", "CountStar",
    "Deduplicate", "Expr", "Generate", "Impute", "Inspect", "Neg", "Num",
    "Numerize", "Predicate", "Prediction", "Star", "Statement", "Token",
    "tokenize", "parse_program", "parse_statement", "pretty_print",
    "print_program",
]
