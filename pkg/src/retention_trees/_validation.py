"""Input checking shared by the estimators.

Estimators accept either a :class:`~retention_trees.arff.Dataset` (``y``
omitted) or a 2-D array of nominal codes / numbers with NaN for missing.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .arff import Attribute, Dataset


class SchemaMismatchError(ValueError):
    """Prediction input does not conform to the training schema."""


def check_fit_input(X, y=None, attributes: Optional[Sequence[Attribute]] = None,
                    classes: Optional[Sequence] = None):
    """Return ``(X, y_codes, feature_attributes, class_attribute, classes)``.

    For array input, ``classes`` fixes the class order (first listed wins
    ties); otherwise the sorted unique labels of ``y`` are used. Rows whose
    class is missing carry code -1.
    """
    if isinstance(X, Dataset):
        if y is not None:
            raise ValueError("y must be omitted when X is a Dataset")
        Xa, codes = X.to_arrays()
        classes = np.array(X.class_attribute.values, dtype=object)
        return Xa, codes, X.feature_attributes, X.class_attribute, classes

    if y is None:
        raise ValueError("y is required for array input")
    Xa = np.asarray(X, dtype=np.float64)
    if Xa.ndim != 2:
        raise ValueError(f"expected a 2-D feature array, got shape {Xa.shape}")
    y = np.asarray(y)
    if y.ndim != 1 or len(y) != len(Xa):
        raise ValueError("y must be 1-D with one label per row of X")

    if classes is None:
        classes = [c for c in np.unique(y)]
    labels = [str(c) for c in classes]
    lookup = {str(c): i for i, c in enumerate(classes)}
    try:
        codes = np.array([lookup[str(v)] for v in y], dtype=np.intp)
    except KeyError as exc:
        raise ValueError(f"label {exc.args[0]!r} not in classes") from None
    class_attribute = Attribute("class", tuple(labels))

    if attributes is None:
        attributes = []
        for j in range(Xa.shape[1]):
            col = Xa[:, j]
            known = col[~np.isnan(col)]
            if np.any(known < 0) or np.any(known != np.round(known)):
                raise ValueError(f"column {j} is not a nominal code column; pass attributes=")
            n_values = int(known.max()) + 1 if len(known) else 1
            attributes.append(Attribute(f"x{j}", tuple(str(v) for v in range(n_values))))
    attributes = tuple(attributes)
    if len(attributes) != Xa.shape[1]:
        raise ValueError("attributes must describe every column of X")
    _check_codes(Xa, attributes, ValueError)
    return Xa, codes, attributes, class_attribute, np.asarray(classes)


def _check_codes(X: np.ndarray, attributes: Sequence[Attribute], error) -> None:
    for j, attr in enumerate(attributes):
        if not attr.is_nominal:
            continue
        col = X[:, j]
        known = col[~np.isnan(col)]
        if np.any(known < 0) or np.any(known >= len(attr.values)) or np.any(known != np.round(known)):
            raise error(f"column {j} ({attr.name}) has codes outside its {len(attr.values)} declared values")


def check_predict_input(X, attributes: Sequence[Attribute]) -> np.ndarray:
    """Feature array for prediction, validated against the training attributes."""
    if isinstance(X, Dataset):
        if tuple(X.feature_attributes) != tuple(attributes):
            raise SchemaMismatchError("dataset attributes differ from the training schema")
        return X.to_arrays()[0]
    Xa = np.asarray(X, dtype=np.float64)
    if Xa.ndim == 1:
        Xa = Xa.reshape(1, -1)
    if Xa.ndim != 2 or Xa.shape[1] != len(attributes):
        raise SchemaMismatchError(
            f"expected {len(attributes)} feature columns, got shape {Xa.shape}")
    _check_codes(Xa, attributes, SchemaMismatchError)
    return Xa
