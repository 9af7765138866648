"""Alternating decision trees for binary classification.

A model is a root prediction value plus an ordered list of splitters. Each
splitter hangs under a prediction node (its precondition: the chain of
earlier splitter outcomes leading there), tests ``attribute = value`` and
carries one prediction value per outcome. An instance's score is the sum of
every prediction value on every path whose tests it satisfies; the class
is the sign of the score.

Training follows the boosting construction of Freund & Mason with the
exhaustive precondition search of Pfahringer, Holmes & Kirkby.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from .arff import Attribute
from ._validation import check_fit_input, check_predict_input

__all__ = [
    "Splitter",
    "ADTModel",
    "ADTreeClassifier",
    "MissingValueError",
    "score_instance",
    "render_adt",
]

Precondition = tuple[tuple[int, bool], ...]


class MissingValueError(ValueError):
    """A splitter test needed an attribute value the instance lacks."""


@dataclass(frozen=True)
class Splitter:
    id: int
    precondition: Precondition
    attribute: int
    value: int
    true_value: float
    false_value: float

    @property
    def depth(self) -> int:
        return len(self.precondition)


@dataclass(frozen=True)
class ADTModel:
    """Root value, splitters in id order, and the feature schema.

    ``classes`` is ``(negative_label, positive_label)``: positive scores
    predict ``classes[1]``.
    """

    root_value: float
    splitters: tuple[Splitter, ...]
    attributes: tuple[Attribute, ...]
    classes: tuple = ("0", "1")

    def __post_init__(self):
        object.__setattr__(self, "splitters", tuple(self.splitters))
        object.__setattr__(self, "attributes", tuple(self.attributes))
        seen: dict[int, Splitter] = {}
        for s in self.splitters:
            if s.id in seen:
                raise ValueError(f"duplicate splitter id {s.id}")
            for pid, _ in s.precondition:
                if pid >= s.id or pid not in seen:
                    raise ValueError(f"splitter {s.id} depends on later or unknown splitter {pid}")
            # a precondition extends its last parent's own precondition
            if s.precondition:
                parent = seen[s.precondition[-1][0]]
                if parent.precondition != s.precondition[:-1]:
                    raise ValueError(f"splitter {s.id} precondition is not a path")
            attr = self.attributes[s.attribute]
            if not attr.is_nominal or not 0 <= s.value < len(attr.values):
                raise ValueError(f"splitter {s.id} tests an invalid nominal value")
            seen[s.id] = s

    def to_dict(self) -> dict:
        return {
            "root_value": self.root_value,
            "classes": list(self.classes),
            "splitters": [
                {"id": s.id, "precondition": [[p, b] for p, b in s.precondition],
                 "attribute": s.attribute, "value": s.value,
                 "true_value": s.true_value, "false_value": s.false_value}
                for s in self.splitters
            ],
        }

    @classmethod
    def from_dict(cls, d: dict, attributes: Sequence[Attribute]) -> "ADTModel":
        splitters = [
            Splitter(s["id"], tuple((int(p), bool(b)) for p, b in s["precondition"]),
                     s["attribute"], s["value"], s["true_value"], s["false_value"])
            for s in d["splitters"]
        ]
        return cls(d["root_value"], tuple(splitters), tuple(attributes), tuple(d["classes"]))


def score_instance(model: ADTModel, x: Sequence[float], missing: str = "error") -> float:
    """Multi-path score of one instance.

    With ``missing="error"`` a needed but missing value raises
    :class:`MissingValueError`; with ``missing="skip"`` that splitter
    contributes nothing and nodes below it are unreachable.
    """
    outcome: dict[int, Optional[bool]] = {}
    total = model.root_value
    for s in model.splitters:
        if not all(outcome.get(pid) is b for pid, b in s.precondition):
            outcome[s.id] = None
            continue
        v = x[s.attribute]
        if v is None or v != v:
            if missing == "error":
                raise MissingValueError(
                    f"splitter ({s.id}) needs {model.attributes[s.attribute].name}, which is missing")
            outcome[s.id] = None
            continue
        hit = int(v) == s.value
        outcome[s.id] = hit
        total += s.true_value if hit else s.false_value
    return total


def _fmt(v: float) -> str:
    text = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def render_adt(model: ADTModel) -> str:
    """Text form: ``: root`` then ``| (id)attr = val: v`` / ``| (id)attr != val: v``
    lines, with one extra ``| `` per precondition level and each prediction
    node's children listed under the line that created it."""
    children: dict[Optional[tuple[int, bool]], list[Splitter]] = {}
    for s in model.splitters:
        key = s.precondition[-1] if s.precondition else None
        children.setdefault(key, []).append(s)
    lines = [f": {_fmt(model.root_value)}"]

    def walk(key) -> None:
        for s in children.get(key, []):
            attr = model.attributes[s.attribute]
            bar = "| " * (s.depth + 1)
            lines.append(f"{bar}({s.id}){attr.name} = {attr.values[s.value]}: {_fmt(s.true_value)}")
            walk((s.id, True))
            lines.append(f"{bar}({s.id}){attr.name} != {attr.values[s.value]}: {_fmt(s.false_value)}")
            walk((s.id, False))

    walk(None)
    return "\n".join(lines) + "\n"


def _half_log_ratio(w_pos: float, w_neg: float) -> float:
    return 0.5 * math.log((w_pos + 1.0) / (w_neg + 1.0))


@dataclass
class BoostTrace:
    """Per-round training diagnostics (round 0 is the root)."""

    weight_totals: list[float] = field(default_factory=list)
    z_values: list[float] = field(default_factory=list)
    induced_totals: list[float] = field(default_factory=list)


class ADTreeClassifier(ClassifierMixin, BaseEstimator):
    """Boosted alternating decision tree over nominal attributes.

    Parameters
    ----------
    n_iterations : int, default=10
        Boosting rounds; each adds exactly one splitter.
    positive_class : label or None, default=None
        Class scored as +1. Defaults to the last declared class.
    missing : {"error", "skip"}, default="error"
        What scoring does when a reached splitter's attribute is missing.
        Training always treats such instances as following neither branch.
    """

    def __init__(self, n_iterations=10, positive_class=None, missing="error"):
        self.n_iterations = n_iterations
        self.positive_class = positive_class
        self.missing = missing

    def fit(self, X, y=None, attributes=None, classes=None):
        if self.n_iterations < 0:
            raise ValueError("n_iterations must be nonnegative")
        if self.missing not in ("error", "skip"):
            raise ValueError("missing must be 'error' or 'skip'")
        X, codes, attrs, class_attr, classes_ = check_fit_input(X, y, attributes, classes)
        if len(classes_) != 2:
            raise ValueError(f"ADTree needs a binary class, got {len(classes_)} classes")
        numeric = [a.name for a in attrs if a.is_numeric]
        if numeric:
            raise ValueError(f"ADTree conditions are nominal equality tests (numeric: {numeric})")
        labelled = codes >= 0
        if not labelled.any():
            raise ValueError("no instance has a known class")
        X, codes = X[labelled], codes[labelled]

        if self.positive_class is None:
            pos = 1
        else:
            matches = [i for i, c in enumerate(classes_) if str(c) == str(self.positive_class)]
            if not matches:
                raise ValueError(f"positive_class {self.positive_class!r} not among {list(classes_)}")
            pos = matches[0]
        self.classes_ = classes_
        self.attributes_ = attrs
        self.class_attribute_ = class_attr
        self.n_features_in_ = X.shape[1]
        self._pos_index = pos

        # canonical row order makes every weight sum independent of input order
        keys = np.column_stack([np.nan_to_num(X, nan=-1.0), codes])
        order = np.lexsort(keys.T[::-1])
        X, codes = X[order], codes[order]
        y = np.where(codes == pos, 1.0, -1.0)

        root, splitters, trace = self._boost(X, y, attrs)
        self.model_ = ADTModel(root, tuple(splitters), attrs,
                               (classes_[1 - pos], classes_[pos]))
        self.trace_ = trace
        return self

    def _boost(self, X: np.ndarray, y: np.ndarray, attrs: Sequence[Attribute]):
        n = len(y)
        positive = y > 0
        w = np.ones(n)
        trace = BoostTrace()
        root = _half_log_ratio(w[positive].sum(), w[~positive].sum())
        w = w * np.exp(-root * y)
        trace.weight_totals.append(float(w.sum()))

        n_values = [len(a.values) for a in attrs]
        codes = [np.where(np.isnan(X[:, a]), -1, X[:, a]).astype(np.intp) for a in range(len(attrs))]
        # prediction nodes: (precondition, membership mask)
        positions: list[tuple[Precondition, np.ndarray]] = [((), np.ones(n, dtype=bool))]
        splitters: list[Splitter] = []

        for t in range(1, self.n_iterations + 1):
            w_total = w.sum()
            best = None
            for a in range(len(attrs)):
                k = n_values[a]
                for p, (pre, mask) in enumerate(positions):
                    sel = mask & (codes[a] >= 0)
                    wp = np.bincount(codes[a][sel & positive], weights=w[sel & positive], minlength=k)
                    wn = np.bincount(codes[a][sel & ~positive], weights=w[sel & ~positive], minlength=k)
                    tp, tn = wp.sum(), wn.sum()
                    rp, rn = tp - wp, tn - wn
                    z = 2.0 * (np.sqrt(wp * wn) + np.sqrt(np.maximum(rp, 0) * np.maximum(rn, 0)))
                    z += w_total - tp - tn
                    for v in range(k):
                        key = (z[v], a, v, p)
                        if best is None or key < best[0]:
                            best = (key, wp[v], wn[v], rp[v], rn[v])
            (z_min, a, v, p), wpc, wnc, wpn, wnn = best
            pre, mask = positions[p]
            tv = _half_log_ratio(wpc, wnc)
            fv = _half_log_ratio(max(wpn, 0.0), max(wnn, 0.0))
            s = Splitter(t, pre, a, v, tv, fv)
            splitters.append(s)

            known = codes[a] >= 0
            hit = mask & known & (codes[a] == v)
            miss = mask & known & (codes[a] != v)
            r = np.where(hit, tv, np.where(miss, fv, 0.0))
            untouched = w_total - wpc - wnc - wpn - wnn
            induced = (untouched + wpc * math.exp(-tv) + wnc * math.exp(tv)
                       + wpn * math.exp(-fv) + wnn * math.exp(fv))
            w = w * np.exp(-r * y)
            trace.weight_totals.append(float(w.sum()))
            trace.z_values.append(float(z_min))
            trace.induced_totals.append(float(induced))
            positions.append((pre + ((t, True),), hit))
            positions.append((pre + ((t, False),), miss))
        return root, splitters, trace

    def decision_function(self, X) -> np.ndarray:
        """Summed prediction values; positive means the positive class."""
        check_is_fitted(self)
        Xa = check_predict_input(X, self.attributes_)
        return np.array([score_instance(self.model_, row, self.missing) for row in Xa])

    def predict(self, X) -> np.ndarray:
        scores = self.decision_function(X)
        neg, pos = self.model_.classes
        out = np.empty(len(scores), dtype=self.classes_.dtype)
        out[:] = [pos if s >= 0 else neg for s in scores]
        return out

    @property
    def n_splitters_(self) -> int:
        check_is_fitted(self)
        return len(self.model_.splitters)

    def export_text(self) -> str:
        check_is_fitted(self)
        return render_adt(self.model_)
