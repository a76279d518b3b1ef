"""Recursive-descent parser turning MQL text into statements.

Clause order follows the statement grammars; optional clauses may be
omitted but not reordered.  Statements are separated by ``;`` (the final
one may leave it off).
"""

from __future__ import annotations

from ..errors import ExclusivityError, MissingClauseError, ParseError
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
    Statement,
)

NUMERIZE_FUNCS = ("log", "log10", "exp", "abs", "sqrt")


def parse_program(text: str) -> list[Statement]:
    """Parse a whole program (one or more ``;``-separated statements)."""
    return _Parser(tokenize(text)).program()


def parse_statement(text: str) -> Statement:
    """Parse exactly one statement (REPL entry point)."""
    statements = parse_program(text)
    if len(statements) != 1:
        raise ParseError(f"expected a single statement, got {len(statements)}")
    return statements[0]


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    # -- token plumbing ------------------------------------------------------

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def _advance(self) -> Token:
        tok = self.current
        self.pos += 1
        return tok

    def _error(self, expected: str) -> ParseError:
        tok = self.current
        found = tok.value if tok.kind != "EOF" else "end of input"
        return ParseError(
            f"expected {expected}, found {found!r} "
            f"(line {tok.line}, column {tok.column})"
        )

    def _at_kw(self, *words: str) -> bool:
        return self.current.kind == "KW" and self.current.value in words

    def _accept_kw(self, word: str) -> bool:
        if self._at_kw(word):
            self._advance()
            return True
        return False

    def _expect_kw(self, word: str) -> None:
        if not self._accept_kw(word):
            raise self._error(word)

    def _accept_punct(self, ch: str) -> bool:
        if self.current.kind == "PUNCT" and self.current.value == ch:
            self._advance()
            return True
        return False

    def _expect_punct(self, ch: str) -> None:
        if not self._accept_punct(ch):
            raise self._error(repr(ch))

    def _ident(self, what: str) -> str:
        if self.current.kind != "IDENT":
            raise self._error(what)
        return self._advance().value

    def _number(self) -> float:
        if self.current.kind != "NUMBER":
            raise self._error("a number")
        return float(self._advance().value)

    # -- program and statements ------------------------------------------------

    def program(self) -> list[Statement]:
        statements: list[Statement] = []
        while self.current.kind != "EOF":
            statements.append(self.statement())
            if not self._accept_punct(";") and self.current.kind != "EOF":
                raise self._error("';' or end of input")
        return statements

    def statement(self) -> Statement:
        if self._accept_kw("GENERATE"):
            return self.generate()
        if self._accept_kw("CONSTRUCT"):
            return self.construct()
        if self._accept_kw("INSPECT"):
            return self.inspect()
        raise self._error("GENERATE, CONSTRUCT or INSPECT")

    def generate(self) -> Generate:
        display = False
        if self._accept_kw("DISPLAY"):
            self._expect_kw("OF")
            display = True

        task, over = self.task_head(allow_over=True)

        model_name = algorithm = None
        if self._accept_kw("USING"):
            if self._accept_kw("MODEL"):
                model_name = self._ident("a model name")
            elif self._accept_kw("ALGORITHM"):
                algorithm = self._ident("an algorithm name")
            else:
                raise self._error("MODEL or ALGORITHM")
        elif self._accept_kw("ALGORITHM"):
            algorithm = self._ident("an algorithm name")
        if model_name is not None and self._at_kw("ALGORITHM"):
            raise ExclusivityError(
                "USING MODEL and ALGORITHM are mutually exclusive"
            )

        accuracy = self.opt_accuracy()

        labels: tuple[str, ...] = ()
        if self._accept_kw("LABEL"):
            labels = self.name_list("a label column")

        features = None
        from_tables: tuple[str, ...] = ()
        where = None
        if self._accept_kw("FEATURES"):
            features = self.feature_list()
            self._expect_kw("FROM")
            from_tables = self.table_list()
            where = self.opt_where()
        elif self._at_kw("FROM"):
            raise self._error("FEATURES before FROM")

        if model_name is None and features is None:
            raise MissingClauseError(
                "FEATURES ... FROM ... is required unless USING MODEL is given"
            )
        return Generate(
            task=task,
            display=display,
            over=over,
            model_name=model_name,
            algorithm=algorithm,
            accuracy=accuracy,
            labels=labels,
            features=features,
            from_tables=from_tables,
            where=where,
        )

    def construct(self) -> Construct:
        model_name = self._ident("a model name")
        supervision = None
        if self._accept_kw("AS"):
            if self._accept_kw("SUPERVISED"):
                supervision = "SUPERVISED"
            elif self._accept_kw("UNSUPERVISED"):
                supervision = "UNSUPERVISED"
            else:
                raise self._error("SUPERVISED or UNSUPERVISED")
        self._expect_kw("FOR")
        task, _ = self.task_head(allow_over=False)

        algorithm = None
        if self._accept_kw("USING"):
            self._accept_kw("ALGORITHM")
            algorithm = self._ident("an algorithm name")
        elif self._accept_kw("ALGORITHM"):
            algorithm = self._ident("an algorithm name")

        accuracy = self.opt_accuracy()

        self._expect_kw("TRAIN")
        self._expect_kw("ON")
        train_n = self.expr("int")
        self._expect_kw("TEST")
        self._expect_kw("ON")
        test_m = self.expr("int")

        self._expect_kw("FEATURES")
        features = self.feature_list()
        self._expect_kw("FROM")
        from_tables = self.table_list()
        where = self.opt_where()
        return Construct(
            model_name=model_name,
            supervision=supervision,
            task=task,
            algorithm=algorithm,
            accuracy=accuracy,
            train_n=train_n,
            test_m=test_m,
            features=features,
            from_tables=from_tables,
            where=where,
        )

    def inspect(self) -> Inspect:
        entries: list[tuple[str, Action | None]] = []
        while True:
            column = self._ident("a column name")
            entries.append((column, self.opt_action()))
            if not self._accept_punct(","):
                break
        seen = [c for c, _ in entries]
        for c in seen:
            if seen.count(c) > 1:
                raise ParseError(f"column {c!r} appears in more than one action")
        self._expect_kw("FROM")
        from_tables = self.table_list()
        where = self.opt_where()
        return Inspect(actions=tuple(entries), from_tables=from_tables, where=where)

    # -- clauses ---------------------------------------------------------------

    def task_head(self, allow_over: bool):
        over = None
        if self._accept_kw("PREDICTION"):
            target = self._ident("a target column")
            over = self.opt_over(allow_over)
            return Prediction(target), over
        if self._accept_kw("CLASSIFICATION"):
            self._expect_kw("INTO")
            labels = self.label_list()
            if len(labels) < 2:
                raise ParseError("CLASSIFICATION INTO needs at least two labels")
            over = self.opt_over(allow_over)
            return Classification(labels), over
        if self._accept_kw("CLUSTER"):
            self._expect_kw("OF")
            k = self.expr("int")
            if self._at_kw("OVER"):
                raise ParseError("OVER cannot follow CLUSTER OF")
            return Cluster(k), None
        raise self._error("PREDICTION, CLASSIFICATION or CLUSTER")

    def opt_over(self, allow_over: bool) -> str | None:
        if self._at_kw("OVER"):
            if not allow_over:
                raise ParseError("OVER is not part of a CONSTRUCT task")
            self._advance()
            return self.table_name()
        return None

    def opt_accuracy(self) -> float | None:
        if self._accept_kw("WITH"):
            self._expect_kw("MODEL")
            self._expect_kw("ACCURACY")
            return self._number()
        return None

    def opt_where(self) -> Predicate | None:
        if not self._accept_kw("WHERE"):
            return None
        comparisons = [self.comparison()]
        while self._accept_kw("AND"):
            comparisons.append(self.comparison())
        return Predicate(tuple(comparisons))

    def comparison(self) -> Comparison:
        column = self._ident("a column name")
        if self.current.kind != "OP":
            raise self._error("a comparison operator")
        op = self._advance().value
        if self.current.kind == "STRING":
            value: float | str = self._advance().value
        else:
            negative = self._accept_punct("-")
            number = self._number()
            value = -number if negative else number
        return Comparison(column, op, value)

    def opt_action(self) -> Action | None:
        if self._accept_kw("CATEGORIZE"):
            self._expect_kw("INTO")
            return Categorize(self.categorize_labels())
        if self._accept_kw("IMPUTE"):
            return Impute()
        if self._accept_kw("NUMERIZE"):
            self._expect_kw("AS")
            return Numerize(self.expr("cell"))
        if self._accept_kw("DEDUPLICATE"):
            return Deduplicate()
        return None

    def name_list(self, what: str) -> tuple[str, ...]:
        names = [self._ident(what)]
        while self._accept_punct(","):
            names.append(self._ident(what))
        return tuple(names)

    def label_list(self) -> tuple[str, ...]:
        labels = [self.label_atom()]
        while self._accept_punct(","):
            labels.append(self.label_atom())
        return tuple(labels)

    def categorize_labels(self) -> tuple[str, ...]:
        # Inside an INSPECT entry the comma both separates labels and starts
        # the next column entry; an identifier followed by an action keyword
        # belongs to the next entry.
        labels = [self.label_atom()]
        while (
            self.current.kind == "PUNCT"
            and self.current.value == ","
            and not self._starts_new_entry()
        ):
            self._advance()
            labels.append(self.label_atom())
        return tuple(labels)

    _ACTION_KEYWORDS = ("CATEGORIZE", "IMPUTE", "NUMERIZE", "DEDUPLICATE")

    def _starts_new_entry(self) -> bool:
        after_comma = self.tokens[min(self.pos + 1, len(self.tokens) - 1)]
        following = self.tokens[min(self.pos + 2, len(self.tokens) - 1)]
        return (
            after_comma.kind == "IDENT"
            and following.kind == "KW"
            and following.value in self._ACTION_KEYWORDS
        )

    def label_atom(self) -> str:
        if self.current.kind in ("IDENT", "STRING"):
            return self._advance().value
        if self.current.kind == "NUMBER":
            return self._advance().value
        raise self._error("a label")

    def feature_list(self):
        if self._accept_punct("*"):
            return STAR
        return self.name_list("a feature column")

    def table_list(self) -> tuple[str, ...]:
        tables = [self.table_name()]
        while self._accept_punct(","):
            tables.append(self.table_name())
        return tuple(tables)

    def table_name(self) -> str:
        # Dotted names let file-style tables (data.csv) appear verbatim.
        parts = [self._ident("a table name")]
        while self._accept_punct("."):
            parts.append(self._ident("a table name part"))
        return ".".join(parts)

    # -- scalar expressions -------------------------------------------------------
    # mode "int": literals, arithmetic, parentheses, COUNT(*)
    # mode "cell": literals, arithmetic, parentheses, column refs, math funcs

    def expr(self, mode: str) -> Expr:
        node = self.term(mode)
        while self.current.kind == "PUNCT" and self.current.value in "+-":
            op = self._advance().value
            node = BinOp(op, node, self.term(mode))
        return node

    def term(self, mode: str) -> Expr:
        node = self.factor(mode)
        while self.current.kind == "PUNCT" and self.current.value in "*/":
            op = self._advance().value
            node = BinOp(op, node, self.factor(mode))
        return node

    def factor(self, mode: str) -> Expr:
        if self._accept_punct("-"):
            return Neg(self.factor(mode))
        if self.current.kind == "NUMBER":
            return Num(self._number())
        if self._accept_punct("("):
            node = self.expr(mode)
            self._expect_punct(")")
            return node
        if self._at_kw("COUNT"):
            if mode != "int":
                raise ParseError("COUNT(*) is only allowed in TRAIN/TEST/CLUSTER counts")
            self._advance()
            self._expect_punct("(")
            self._expect_punct("*")
            self._expect_punct(")")
            return CountStar()
        if self.current.kind == "IDENT":
            name = self._advance().value
            if self._accept_punct("("):
                if mode != "cell":
                    raise ParseError(
                        f"aggregate {name}(...) is not supported here; "
                        "COUNT(*) is the only aggregate"
                    )
                if name not in NUMERIZE_FUNCS:
                    raise ParseError(
                        f"unknown function {name!r}; "
                        f"supported: {', '.join(NUMERIZE_FUNCS)}"
                    )
                arg = self.expr(mode)
                self._expect_punct(")")
                return Call(name, arg)
            if mode != "cell":
                raise ParseError(
                    f"column reference {name!r} is not allowed in an integer expression"
                )
            return ColRef(name)
        raise self._error("an expression")
