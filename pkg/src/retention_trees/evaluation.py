"""Stratified k-fold cross-validation and confusion-matrix metrics."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from sklearn.base import clone

from .arff import Dataset

__all__ = [
    "ConfusionMatrix",
    "EvalReport",
    "stratified_folds",
    "precision_recall",
    "cross_validate",
    "format_report",
    "REPORT_KEYS",
]

REPORT_KEYS = (
    "algorithm",
    "accuracy_pct",
    "incorrect_pct",
    "unclassified_pct",
    "precision",
    "recall",
    "build_time_s",
    "k",
    "seed",
)


def stratified_folds(dataset: Dataset, k: int = 10, seed: int = 0) -> list[np.ndarray]:
    """Partition instance indices into ``k`` class-stratified folds.

    Each class's indices are shuffled with ``seed`` and dealt round-robin,
    continuing from the fold where the previous class stopped, so per-class
    and total fold sizes each differ by at most one.
    """
    n = len(dataset)
    if k < 2:
        raise ValueError("k must be at least 2")
    if k > n:
        raise ValueError(f"cannot make {k} folds from {n} instances")
    rng = np.random.default_rng(seed)
    _, codes = dataset.to_arrays()
    folds: list[list[int]] = [[] for _ in range(k)]
    position = 0
    # missing class labels (-1) are dealt as a group of their own, last
    for c in list(range(len(dataset.class_attribute.values))) + [-1]:
        members = np.flatnonzero(codes == c)
        members = members[rng.permutation(len(members))]
        for i in members:
            folds[position % k].append(int(i))
            position += 1
    return [np.array(sorted(f), dtype=np.intp) for f in folds]


@dataclass
class ConfusionMatrix:
    """Counts indexed ``[true class, predicted class]``; the last column
    counts instances left unclassified."""

    labels: tuple[str, ...]
    counts: np.ndarray = None

    def __post_init__(self):
        self.labels = tuple(str(label) for label in self.labels)
        if self.counts is None:
            self.counts = np.zeros((len(self.labels), len(self.labels) + 1), dtype=np.int64)

    def add(self, true: int, predicted: Optional[int]) -> None:
        self.counts[true, len(self.labels) if predicted is None else predicted] += 1

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def correct(self) -> int:
        return int(np.trace(self.counts[:, :-1]))

    @property
    def unclassified(self) -> int:
        return int(self.counts[:, -1].sum())

    @property
    def incorrect(self) -> int:
        return self.total - self.correct - self.unclassified


def precision_recall(cm: ConfusionMatrix, positive) -> tuple[float, float]:
    """Precision and recall of ``positive``; each is 0 when its denominator is.

    Unclassified predictions are neither true nor false positives, but an
    unclassified positive instance is a false negative.
    """
    positive = str(positive)
    if positive not in cm.labels:
        raise ValueError(f"unknown positive class {positive!r}; labels are {cm.labels}")
    p = cm.labels.index(positive)
    tp = cm.counts[p, p]
    predicted = cm.counts[:, p].sum()
    actual = cm.counts[p, :].sum()
    precision = float(tp / predicted) if predicted else 0.0
    recall = float(tp / actual) if actual else 0.0
    return precision, recall


@dataclass
class EvalReport:
    algorithm: str
    accuracy_pct: float
    incorrect_pct: float
    unclassified_pct: float
    precision: float
    recall: float
    build_time_s: float
    k: int
    seed: int
    positive_class: str = "0"
    confusion: Optional[ConfusionMatrix] = field(default=None, repr=False)

    def to_dict(self, timing: bool = True) -> dict:
        d = {key: getattr(self, key) for key in REPORT_KEYS}
        if not timing:
            del d["build_time_s"]
        d["positive_class"] = self.positive_class
        if self.confusion is not None:
            d["n_instances"] = self.confusion.total
            d["confusion_matrix"] = {
                "labels": list(self.confusion.labels),
                "counts": self.confusion.counts.tolist(),
            }
        return d


def _label_codes(predictions, labels: Sequence[str]) -> list[Optional[int]]:
    lookup = {label: i for i, label in enumerate(labels)}
    return [None if p is None else lookup[str(p)] for p in predictions]


def cross_validate(estimator, dataset: Dataset, k: int = 10, seed: int = 0,
                   positive_class=None, algorithm: Optional[str] = None) -> EvalReport:
    """Pooled k-fold evaluation of an unfitted estimator on ``dataset``.

    Each fold trains a fresh clone on the other folds and predicts the
    held-out one; all predictions go into a single confusion matrix. Build
    time is the mean training wall-clock time per fold.

    ``positive_class`` defaults to the dropout label ``"0"`` when the class
    attribute has one, else to the first declared class.
    """
    labels = dataset.class_attribute.values
    if positive_class is None:
        positive_class = "0" if "0" in labels else labels[0]
    if str(positive_class) not in labels:
        raise ValueError(f"unknown positive class {positive_class!r}; labels are {labels}")
    folds = stratified_folds(dataset, k, seed)
    _, codes = dataset.to_arrays()
    cm = ConfusionMatrix(labels)
    times = []
    all_idx = np.arange(len(dataset))
    for f, test_idx in enumerate(folds):
        train_idx = np.setdiff1d(all_idx, test_idx)
        model = clone(estimator)
        start = time.perf_counter()
        try:
            model.fit(dataset.subset(train_idx))
        except ValueError as exc:
            raise ValueError(f"fold {f}: {exc}") from exc
        times.append(time.perf_counter() - start)
        predicted = _label_codes(model.predict(dataset.subset(test_idx)), labels)
        for i, p in zip(test_idx, predicted):
            if codes[i] >= 0:
                cm.add(codes[i], p)

    total = cm.total
    precision, recall = precision_recall(cm, positive_class)
    return EvalReport(
        algorithm=algorithm or type(estimator).__name__,
        accuracy_pct=100.0 * cm.correct / total,
        incorrect_pct=100.0 * cm.incorrect / total,
        unclassified_pct=100.0 * cm.unclassified / total,
        precision=precision,
        recall=recall,
        build_time_s=float(np.mean(times)),
        k=k,
        seed=seed,
        positive_class=str(positive_class),
        confusion=cm,
    )


_COLUMNS = (
    ("Algorithm", "{:<9}", lambda r: r.algorithm),
    ("Correctly Classified", "{:>20}", lambda r: f"{r.accuracy_pct:.3f}%"),
    ("Incorrectly Classified", "{:>22}", lambda r: f"{r.incorrect_pct:.3f}%"),
    ("Unclassified", "{:>12}", lambda r: f"{r.unclassified_pct:.3f}%"),
    ("Precision", "{:>9}", lambda r: f"{100 * r.precision:.1f}%"),
    ("Recall", "{:>7}", lambda r: f"{100 * r.recall:.1f}%"),
    ("Build Time (s)", "{:>14}", lambda r: f"{r.build_time_s:.2f}"),
)


def format_report(reports: Sequence[EvalReport], timing: bool = True) -> str:
    """Aligned plain-text table, one row per algorithm."""
    cols = _COLUMNS if timing else _COLUMNS[:-1]
    lines = ["  ".join(fmt.format(name) for name, fmt, _ in cols)]
    for r in reports:
        lines.append("  ".join(fmt.format(get(r)) for _, fmt, get in cols))
    return "\n".join(line.rstrip() for line in lines) + "\n"


def reports_to_json(reports: Sequence[EvalReport], timing: bool = True) -> str:
    return json.dumps([r.to_dict(timing) for r in reports], indent=2) + "\n"
