"""ID3: multiway nominal splits chosen by information gain, no pruning."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from . import _tree
from ._tree import Node, majority
from ._validation import check_fit_input, check_predict_input
from .impurity import contingency, gain_from_table

__all__ = ["ID3Classifier", "UNCLASSIFIED"]

#: Prediction for an instance that strict traversal cannot route.
UNCLASSIFIED = None

_GAIN_TIE_EPS = 1e-12


class ID3Classifier(ClassifierMixin, BaseEstimator):
    """Quinlan's ID3 over nominal attributes.

    Every split has one branch per declared value of the chosen attribute;
    a branch that receives no training instances becomes a leaf labelled
    with the parent's majority class. Prediction follows a single path, and
    an instance whose value is missing at a split it reaches is returned as
    :data:`UNCLASSIFIED`.

    Training rejects numeric attributes and missing cells; use
    :class:`~retention_trees.c45.C45Classifier` for those.

    Parameters
    ----------
    empty_branch : {"majority", "unclassified"}, default="majority"
        Prediction at a branch no training instance reached: the parent's
        majority class, or :data:`UNCLASSIFIED`.
    """

    def __init__(self, empty_branch="majority"):
        self.empty_branch = empty_branch

    def fit(self, X, y=None, attributes=None, classes=None):
        if self.empty_branch not in ("majority", "unclassified"):
            raise ValueError("empty_branch must be 'majority' or 'unclassified'")
        X, codes, attrs, class_attr, classes_ = check_fit_input(X, y, attributes, classes)
        if len(X) == 0:
            raise ValueError("cannot train on an empty dataset")
        numeric = [a.name for a in attrs if a.is_numeric]
        if numeric:
            raise ValueError(f"ID3 accepts nominal attributes only (numeric: {numeric}); use C4.5")
        if np.isnan(X).any() or (codes < 0).any():
            raise ValueError("ID3 cannot train on missing values; use C4.5")

        self.attributes_ = attrs
        self.class_attribute_ = class_attr
        self.classes_ = classes_
        self.n_features_in_ = X.shape[1]
        n_classes = len(class_attr.values)
        n_values = [len(a.values) for a in attrs]

        def build(idx: np.ndarray, available: tuple[int, ...], parent_label: int) -> Node:
            counts = np.bincount(codes[idx], minlength=n_classes).astype(np.float64)
            label = majority(counts, parent_label)
            if len(idx) == 0 or np.count_nonzero(counts) <= 1 or not available:
                return Node(counts, label)
            gains = [
                gain_from_table(contingency(X[idx, a], codes[idx], None, n_values[a], n_classes))
                for a in available
            ]
            best = max(gains)
            attr = next(a for a, g in zip(available, gains) if g >= best - _GAIN_TIE_EPS)
            rest = tuple(a for a in available if a != attr)
            col = X[idx, attr]
            children = [build(idx[col == v], rest, label) for v in range(n_values[attr])]
            return Node(counts, label, attribute=attr, children=children)

        self.tree_ = build(np.arange(len(X)), tuple(range(len(attrs))), 0)
        return self

    def trace(self, x) -> list[Node]:
        """Nodes on the root-to-leaf path of one instance (empty if unroutable)."""
        check_is_fitted(self)
        row = check_predict_input(x, self.attributes_)[0]
        return _tree.path_to_leaf(self.tree_, row) or []

    def predict(self, X) -> np.ndarray:
        """Class labels; :data:`UNCLASSIFIED` where traversal hits a missing value."""
        check_is_fitted(self)
        Xa = check_predict_input(X, self.attributes_)
        strict = self.empty_branch == "unclassified"
        out = np.empty(len(Xa), dtype=object)
        for i, row in enumerate(Xa):
            path = _tree.path_to_leaf(self.tree_, row)
            if path is None or (strict and path[-1].weight == 0):
                out[i] = UNCLASSIFIED
            else:
                out[i] = self.classes_[path[-1].label]
        return out

    def score(self, X, y=None, sample_weight=None):
        """Fraction correct; unclassified instances count as wrong."""
        if y is None:
            _, codes = X.to_arrays()
            y = self.classes_[codes]
        pred = self.predict(X)
        hits = np.array([p is not None and p == t for p, t in zip(pred, y)], dtype=float)
        return float(np.average(hits, weights=sample_weight))

    @property
    def n_nodes_(self) -> int:
        check_is_fitted(self)
        return _tree.node_count(self.tree_)

    def export_text(self) -> str:
        check_is_fitted(self)
        return _tree.render(self.tree_, self.attributes_, self.class_attribute_.values)
