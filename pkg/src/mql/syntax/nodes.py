"""Abstract syntax for MQL statements, predicates and scalar expressions."""

from __future__ import annotations

from dataclasses import dataclass


# --- scalar expressions (TRAIN/TEST/cluster counts, NUMERIZE bodies) ---------

class Expr:
    pass


@dataclass(frozen=True)
class Num(Expr):
    value: float


@dataclass(frozen=True)
class ColRef(Expr):
    name: str


@dataclass(frozen=True)
class BinOp(Expr):
    op: str  # + - * /
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class Call(Expr):
    func: str  # log, log10, exp, abs, sqrt
    arg: Expr


@dataclass(frozen=True)
class CountStar(Expr):
    pass


# --- WHERE predicates ---------------------------------------------------------

@dataclass(frozen=True)
class Comparison:
    column: str
    op: str  # = <> < <= > >=
    value: float | str


@dataclass(frozen=True)
class Predicate:
    comparisons: tuple[Comparison, ...]


# --- task heads ----------------------------------------------------------------

@dataclass(frozen=True)
class Prediction:
    target: str


@dataclass(frozen=True)
class Classification:
    labels: tuple[str, ...]


@dataclass(frozen=True)
class Cluster:
    k: Expr


TaskHead = Prediction | Classification | Cluster


# --- INSPECT actions -------------------------------------------------------------

@dataclass(frozen=True)
class Categorize:
    labels: tuple[str, ...]


@dataclass(frozen=True)
class Impute:
    pass


@dataclass(frozen=True)
class Numerize:
    expr: Expr


@dataclass(frozen=True)
class Deduplicate:
    pass


Action = Categorize | Impute | Numerize | Deduplicate


# --- feature lists ---------------------------------------------------------------

@dataclass(frozen=True)
class Star:
    """``FEATURES *``: every column except targets and labels."""


STAR = Star()


# --- statements -------------------------------------------------------------------

@dataclass(frozen=True)
class Generate:
    task: TaskHead
    display: bool = False
    over: str | None = None
    model_name: str | None = None      # USING MODEL
    algorithm: str | None = None       # [USING] ALGORITHM
    accuracy: float | None = None      # WITH MODEL ACCURACY, as written
    labels: tuple[str, ...] = ()
    features: tuple[str, ...] | Star | None = None
    from_tables: tuple[str, ...] = ()
    where: Predicate | None = None


@dataclass(frozen=True)
class Construct:
    model_name: str
    task: TaskHead
    train_n: Expr
    test_m: Expr
    features: tuple[str, ...] | Star
    from_tables: tuple[str, ...]
    supervision: str | None = None     # "SUPERVISED" | "UNSUPERVISED"
    algorithm: str | None = None
    accuracy: float | None = None
    where: Predicate | None = None


@dataclass(frozen=True)
class Inspect:
    actions: tuple[tuple[str, Action | None], ...]
    from_tables: tuple[str, ...]
    where: Predicate | None = None


Statement = Generate | Construct | Inspect
