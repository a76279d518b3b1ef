"""Seeded deterministic train/test row splitting."""

from __future__ import annotations

import logging

from ..errors import RangeError, TrainTooLarge
from ..table import Table
from .rng import Lcg64

log = logging.getLogger("mql")


def train_test_split(t: Table, n: int, m: int, seed: int) -> tuple[Table, Table]:
    """Shuffle rows with the seeded generator; first ``n`` train, next ``m`` test.

    ``m`` is clamped (with a warning) when ``n + m`` exceeds the row count;
    leftover rows are unused.
    """
    if n < 1:
        raise RangeError(f"TRAIN ON needs at least one row, got {n}")
    if m < 0:
        raise RangeError(f"TEST ON cannot be negative, got {m}")
    rows = t.row_count
    if n > rows:
        raise TrainTooLarge(
            f"TRAIN ON {n} exceeds the {rows} available rows of {t.name!r}"
        )
    if n + m > rows:
        clamped = rows - n
        log.warning(
            "TEST ON %d clamped to %d (%d rows available after TRAIN ON %d)",
            m, clamped, rows, n,
        )
        m = clamped
    order = list(range(rows))
    Lcg64(seed).shuffle(order)
    return t.take_rows(order[:n]), t.take_rows(order[n:n + m])
