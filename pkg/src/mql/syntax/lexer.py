"""Tokenizer for MQL source text.

Keywords are case-insensitive reserved words; identifiers that collide with
one must be double-quoted.  ``--`` starts a comment running to end of line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import LexError

KEYWORDS = frozenset({
    "GENERATE", "CONSTRUCT", "INSPECT",
    "DISPLAY", "OF", "PREDICTION", "CLASSIFICATION", "INTO", "CLUSTER",
    "USING", "MODEL", "ALGORITHM", "WITH", "ACCURACY", "LABEL",
    "FEATURES", "FROM", "WHERE", "OVER",
    "AS", "FOR", "SUPERVISED", "UNSUPERVISED",
    "TRAIN", "TEST", "ON",
    "CATEGORIZE", "IMPUTE", "NUMERIZE", "DEDUPLICATE",
    "AND", "COUNT",
})

# Token kinds: KW (keyword), IDENT, NUMBER, STRING, OP, PUNCT, EOF.
_TOKEN_RE = re.compile(
    r"""
    (?P<comment>--[^\n]*)
  | (?P<ws>\s+)
  | (?P<number>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<qident>"(?:[^"]|"")*")
  | (?P<string>'(?:[^']|'')*')
  | (?P<op><=|>=|<>|=|<|>)
  | (?P<punct>[(),;*+\-/.])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    column: int

    def is_kw(self, word: str) -> bool:
        return self.kind == "KW" and self.value == word


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into tokens, dropping whitespace and comments."""
    tokens: list[Token] = []
    pos = 0
    line = 1
    line_start = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise LexError(
                f"illegal character {text[pos]!r}", line, pos - line_start + 1
            )
        column = pos - line_start + 1
        kind = m.lastgroup
        value = m.group()
        if kind == "ident":
            upper = value.upper()
            if upper in KEYWORDS:
                tokens.append(Token("KW", upper, line, column))
            else:
                tokens.append(Token("IDENT", value, line, column))
        elif kind == "qident":
            tokens.append(Token("IDENT", value[1:-1].replace('""', '"'), line, column))
        elif kind == "string":
            tokens.append(Token("STRING", value[1:-1].replace("''", "'"), line, column))
        elif kind == "number":
            tokens.append(Token("NUMBER", value, line, column))
        elif kind == "op":
            tokens.append(Token("OP", value, line, column))
        elif kind == "punct":
            tokens.append(Token("PUNCT", value, line, column))
        # comments and whitespace are skipped; track line numbers
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = pos + value.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("EOF", "", line, len(text) - line_start + 1))
    return tokens
