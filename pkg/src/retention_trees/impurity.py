"""Entropy-based split statistics (bits).

The column-level functions take an attribute column ``x`` of value codes
(NaN marks a missing cell) and class codes ``y``; rows with a missing
attribute value are left out, so any missing-value correction is up to the
caller. Counts may be real-valued weights.
"""

from __future__ import annotations

from typing import Mapping, Optional, Union

import numpy as np

__all__ = [
    "entropy",
    "contingency",
    "gain_from_table",
    "split_info_from_table",
    "info_gain",
    "split_info",
    "gain_ratio",
]

Counts = Union[Mapping[object, float], np.ndarray, list, tuple]


def entropy(counts: Counts) -> float:
    """Shannon entropy of a class distribution; 0 for an empty one."""
    if isinstance(counts, Mapping):
        counts = list(counts.values())
    c = np.asarray(counts, dtype=np.float64)
    if np.any(c < 0):
        raise ValueError("class counts must be nonnegative")
    total = c.sum()
    if total <= 0:
        return 0.0
    p = c[c > 0] / total
    return max(0.0, float(-(p * np.log2(p)).sum()))


def contingency(x, y, sample_weight=None, n_values: Optional[int] = None,
                n_classes: Optional[int] = None) -> np.ndarray:
    """Weighted (value, class) table over the rows where ``x`` is known."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.intp)
    w = np.ones(len(x)) if sample_weight is None else np.asarray(sample_weight, dtype=np.float64)
    known = ~np.isnan(x)
    xv = x[known].astype(np.intp)
    yv = y[known]
    if n_values is None:
        n_values = int(xv.max()) + 1 if len(xv) else 0
    if n_classes is None:
        n_classes = int(y.max()) + 1 if len(y) else 0
    table = np.zeros((n_values, n_classes))
    np.add.at(table, (xv, yv), w[known])
    return table


def gain_from_table(table: np.ndarray) -> float:
    table = np.asarray(table, dtype=np.float64)
    total = table.sum()
    if total <= 0:
        return 0.0
    sizes = table.sum(axis=1)
    cond = sum(s / total * entropy(row) for s, row in zip(sizes, table) if s > 0)
    return entropy(table.sum(axis=0)) - cond


def split_info_from_table(table: np.ndarray) -> float:
    return entropy(np.asarray(table, dtype=np.float64).sum(axis=1))


def _table(x, y, sample_weight):
    if len(x) == 0:
        raise ValueError("split statistics need a nonempty dataset")
    return contingency(x, y, sample_weight)


def info_gain(x, y, sample_weight=None) -> float:
    """H(class) minus the size-weighted class entropy of each value partition."""
    return gain_from_table(_table(x, y, sample_weight))


def split_info(x, y=None, sample_weight=None) -> float:
    """Entropy of the partition sizes induced by ``x``."""
    if y is None:
        y = np.zeros(len(x), dtype=np.intp)
    return split_info_from_table(_table(x, y, sample_weight))


def gain_ratio(x, y, sample_weight=None) -> float:
    """Information gain over split information; 0 when split information is 0."""
    table = _table(x, y, sample_weight)
    si = split_info_from_table(table)
    if si <= 0:
        return 0.0
    return gain_from_table(table) / si
