"""Clustering agreement scores: adjusted Rand index and SIM."""

from __future__ import annotations

import numpy as np

__all__ = ["ari", "sim", "repeat_labels"]


def _contingency(a, b) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 1 or a.shape != b.shape:
        raise ValueError("label vectors must be 1-d and of equal length")
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    na, nb = ai.max() + 1, bi.max() + 1
    table = np.zeros((na, nb), dtype=np.int64)
    np.add.at(table, (ai, bi), 1)
    return table, table.sum(axis=1), table.sum(axis=0)


def _comb2(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    return x * (x - 1) // 2


def ari(a, b) -> float:
    """Hubert-Arabie adjusted Rand index between two labelings.

    Equals 1 iff the partitions coincide up to label renaming; can be
    negative for partitions less similar than chance, which is reported
    as-is.  Computed in exact integer arithmetic with a single final
    division.
    """
    table, rows, cols = _contingency(a, b)
    n = int(rows.sum())
    if n < 2:
        raise ValueError("adjusted Rand index needs at least 2 units")
    index = int(_comb2(table).sum())
    sum_rows = int(_comb2(rows).sum())
    sum_cols = int(_comb2(cols).sum())
    pairs = n * (n - 1) // 2
    # (index - E) / ((sum_rows + sum_cols)/2 - E) with E = sum_rows*sum_cols/pairs,
    # rescaled by 2*pairs to stay integral.
    num = 2 * pairs * index - 2 * sum_rows * sum_cols
    den = pairs * (sum_rows + sum_cols) - 2 * sum_rows * sum_cols
    if den == 0:
        return 1.0
    return num / den


def sim(ground, predicted) -> float:
    """Average best-match Dice overlap of ground-truth classes.

    For each ground-truth class the best predicted cluster is scored with
    ``2 |G ∩ A| / (|G| + |A|)``, so identical partitions score exactly 1;
    the result is the mean over the ground-truth classes.
    """
    table, rows, cols = _contingency(ground, predicted)
    dice = 2.0 * table / (rows[:, None] + cols[None, :])
    return float(dice.max(axis=1).mean())


def repeat_labels(unit_labels, counts) -> np.ndarray:
    """Expand unit-level labels to member level (`counts` members per unit)."""
    return np.repeat(np.asarray(unit_labels), np.asarray(counts, dtype=int))
