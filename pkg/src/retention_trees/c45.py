"""C4.5 decision trees: gain ratio, numeric thresholds, missing values,
error-based pruning."""

from __future__ import annotations

import numpy as np
from scipy.special import betaincinv
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from . import _tree
from ._tree import Node, majority
from ._validation import check_fit_input, check_predict_input
from .impurity import contingency, entropy, gain_from_table

__all__ = ["C45Classifier", "prune", "pessimistic_errors", "upper_error_bound"]

_EPS = 1e-12


def upper_error_bound(errors: float, n: float, confidence_factor: float) -> float:
    """Upper confidence limit on the error rate of ``errors`` out of ``n``.

    This is the exact binomial (Clopper-Pearson) bound: the ``p`` at which
    observing at most ``errors`` errors has probability ``confidence_factor``.
    Real-valued counts are handled through the incomplete beta function.
    """
    if n <= 0:
        return 0.0
    if errors >= n:
        return 1.0
    return float(betaincinv(errors + 1.0, n - errors, 1.0 - confidence_factor))


def pessimistic_errors(counts: np.ndarray, confidence_factor: float) -> float:
    """Predicted errors ``N * U_CF(E, N)`` if ``counts`` were a single leaf."""
    n = float(np.sum(counts))
    if n <= 0:
        return 0.0
    e = n - float(np.max(counts))
    return n * upper_error_bound(e, n, confidence_factor)


def _subtree_errors(node: Node, cf: float) -> float:
    if node.is_leaf:
        return pessimistic_errors(node.counts, cf)
    return sum(_subtree_errors(c, cf) for c in node.children)


def prune(tree: Node, confidence_factor: float = 0.25) -> Node:
    """Bottom-up subtree replacement.

    A subtree becomes a leaf when the leaf's predicted errors do not exceed
    the sum over the subtree's leaves. Returns a new tree; ``tree`` is not
    modified.
    """
    if not 0.0 < confidence_factor < 1.0:
        raise ValueError("confidence_factor must lie in (0, 1)")

    def walk(node: Node) -> Node:
        if node.is_leaf:
            return Node(node.counts.copy(), node.label)
        children = [walk(c) for c in node.children]
        candidate = Node(node.counts.copy(), node.label, node.attribute, node.threshold, children)
        as_leaf = pessimistic_errors(node.counts, confidence_factor)
        if as_leaf <= _subtree_errors(candidate, confidence_factor) + _EPS:
            return Node(node.counts.copy(), node.label)
        return candidate

    return walk(tree)


class C45Classifier(ClassifierMixin, BaseEstimator):
    """C4.5 (Release 8 style) without subtree raising.

    Parameters
    ----------
    confidence_factor : float, default=0.25
        Confidence used by the pessimistic error estimate. Larger values
        prune less.
    min_leaf_weight : float, default=2.0
        A split is only considered when at least two of its branches receive
        this much training weight.
    prune : bool, default=True
        Apply error-based pruning after growing.
    above_average_gain : bool, default=True
        Restrict the gain-ratio choice to candidates whose information gain
        is at least the average over all candidate splits.
    """

    def __init__(self, confidence_factor=0.25, min_leaf_weight=2.0, prune=True,
                 above_average_gain=True):
        self.confidence_factor = confidence_factor
        self.min_leaf_weight = min_leaf_weight
        self.prune = prune
        self.above_average_gain = above_average_gain

    def fit(self, X, y=None, attributes=None, classes=None):
        if not 0.0 < self.confidence_factor <= 0.5:
            raise ValueError("confidence_factor must lie in (0, 0.5]")
        if self.min_leaf_weight < 1:
            raise ValueError("min_leaf_weight must be at least 1")
        X, codes, attrs, class_attr, classes_ = check_fit_input(X, y, attributes, classes)
        labelled = codes >= 0
        if not labelled.any():
            raise ValueError("no instance has a known class")
        self.attributes_ = attrs
        self.class_attribute_ = class_attr
        self.classes_ = classes_
        self.n_features_in_ = X.shape[1]

        X, codes = X[labelled], codes[labelled]
        self._X, self._y = X, codes
        self._n_classes = len(class_attr.values)
        try:
            grown = self._grow(np.arange(len(X)), np.ones(len(X)), frozenset(), 0)
        finally:
            del self._X, self._y
        self.grown_tree_ = grown
        self.tree_ = prune(grown, self.confidence_factor) if self.prune else grown
        return self

    # -- growing -------------------------------------------------------------

    def _evaluate(self, a: int, idx: np.ndarray, w: np.ndarray, total: float):
        """Best split on attribute ``a``: (gain, split_info, threshold) or None."""
        col = self._X[idx, a]
        y = self._y[idx]
        known = ~np.isnan(col)
        known_w = w[known].sum()
        if known_w <= 0:
            return None
        frac_known = known_w / total
        unknown_w = total - known_w
        attr = self.attributes_[a]
        k = self._n_classes

        if attr.is_nominal:
            table = contingency(col, y, w, len(attr.values), k)
            if np.count_nonzero(table.sum(axis=1) >= self.min_leaf_weight) < 2:
                return None
            gain = frac_known * gain_from_table(table)
            si = entropy(np.append(table.sum(axis=1), unknown_w))
            return gain, si, None

        xs, ys, ws = col[known], y[known], w[known]
        order = np.argsort(xs, kind="stable")
        xs, ys, ws = xs[order], ys[order], ws[order]
        onehot = np.zeros((len(xs), k))
        onehot[np.arange(len(xs)), ys] = ws
        cum = np.cumsum(onehot, axis=0)
        full = cum[-1]
        # candidate cut after position i where the value changes
        cuts = np.nonzero(np.diff(xs) > 0)[0]
        best = None
        for i in cuts:
            left = cum[i]
            right = full - left
            if left.sum() < self.min_leaf_weight or right.sum() < self.min_leaf_weight:
                continue
            g = gain_from_table(np.vstack([left, right]))
            if best is None or g > best[0] + _EPS:
                best = (g, (xs[i] + xs[i + 1]) / 2.0, left.sum(), right.sum())
        if best is None:
            return None
        g, threshold, lw, rw = best
        return frac_known * g, entropy([lw, rw, unknown_w]), threshold

    def _grow(self, idx: np.ndarray, w: np.ndarray, used: frozenset, parent_label: int) -> Node:
        counts = np.bincount(self._y[idx], weights=w, minlength=self._n_classes)
        total = counts.sum()
        label = majority(counts, parent_label)
        if total <= _EPS or np.count_nonzero(counts > _EPS) <= 1 or total < 2 * self.min_leaf_weight:
            return Node(counts, label)

        candidates = []
        for a, attr in enumerate(self.attributes_):
            if attr.is_nominal and a in used:
                continue
            result = self._evaluate(a, idx, w, total)
            if result is not None:
                candidates.append((a,) + result)
        if not candidates:
            return Node(counts, label)

        eligible = [c for c in candidates if c[1] > _EPS and c[2] > _EPS]
        if self.above_average_gain and eligible:
            avg = np.mean([c[1] for c in candidates])
            eligible = [c for c in eligible if c[1] >= avg - _EPS]
        if not eligible:
            return Node(counts, label)
        ratios = [g / si for _, g, si, _ in eligible]
        top = max(ratios)
        a, _, _, threshold = next(c for c, r in zip(eligible, ratios) if r >= top - _EPS)

        col = self._X[idx, a]
        missing = np.isnan(col)
        if threshold is None:
            branch = np.where(missing, -1, np.nan_to_num(col, nan=-1)).astype(np.intp)
            n_branches = len(self.attributes_[a].values)
        else:
            branch = np.where(missing, -1, np.where(col <= threshold, 0, 1))
            n_branches = 2
        branch_w = np.array([w[branch == b].sum() for b in range(n_branches)])
        fractions = branch_w / branch_w.sum()

        children = []
        child_used = used | {a} if threshold is None else used
        for b in range(n_branches):
            take = branch == b
            spread = missing & (fractions[b] > 0)
            c_idx = np.concatenate([idx[take], idx[spread]])
            c_w = np.concatenate([w[take], w[spread] * fractions[b]])
            children.append(self._grow(c_idx, c_w, child_used, label))
        return Node(counts, label, attribute=a, threshold=threshold, children=children)

    # -- prediction ----------------------------------------------------------

    def _distribution(self, node: Node, x: np.ndarray, weight: float, out: np.ndarray) -> None:
        if node.is_leaf:
            total = node.weight
            if total > 0:
                out += weight * node.counts / total
            else:
                out[node.label] += weight
            return
        b = _tree.branch_index(node, x[node.attribute])
        if b is not None:
            self._distribution(node.children[b], x, weight, out)
            return
        sizes = np.array([c.weight for c in node.children])
        for child, share in zip(node.children, sizes / sizes.sum()):
            if share > 0:
                self._distribution(child, x, weight * share, out)

    def predict_proba(self, X) -> np.ndarray:
        """Class distribution; a missing split value spreads the instance over
        all branches in proportion to their training weight."""
        check_is_fitted(self)
        Xa = check_predict_input(X, self.attributes_)
        out = np.zeros((len(Xa), len(self.classes_)))
        for i, row in enumerate(Xa):
            self._distribution(self.tree_, row, 1.0, out[i])
        return out

    def predict(self, X) -> np.ndarray:
        proba = self.predict_proba(X)
        return self.classes_[np.argmax(proba, axis=1)]

    @property
    def n_nodes_(self) -> int:
        check_is_fitted(self)
        return _tree.node_count(self.tree_)

    def export_text(self) -> str:
        check_is_fitted(self)
        return _tree.render(self.tree_, self.attributes_, self.class_attribute_.values)
