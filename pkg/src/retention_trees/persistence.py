"""JSON model files for fitted estimators.

A model file records a format version, the algorithm tag, the training
schema and its fingerprint, the estimator parameters and the fitted
structure. Floats are written with ``repr`` precision, so a loaded model
predicts bit-identically to the one that was saved.
"""

from __future__ import annotations

import hashlib
import json
import os
from typing import Sequence, Union

import numpy as np

from . import _tree
from ._validation import SchemaMismatchError
from .adtree import ADTModel, ADTreeClassifier
from .arff import Attribute, Dataset
from .c45 import C45Classifier
from .id3 import ID3Classifier

__all__ = ["FORMAT_VERSION", "schema_fingerprint", "dump_model", "load_model",
           "save_model", "model_to_dict", "model_from_dict", "check_schema"]

FORMAT_VERSION = 1

_TAGS = {ID3Classifier: "id3", C45Classifier: "c45", ADTreeClassifier: "adt"}
_CLASSES = {tag: cls for cls, tag in _TAGS.items()}


def _attr_to_json(a: Attribute) -> dict:
    return {"name": a.name, "values": None if a.values is None else list(a.values)}


def _attr_from_json(d: dict) -> Attribute:
    return Attribute(d["name"], None if d["values"] is None else tuple(d["values"]))


def schema_fingerprint(features: Sequence[Attribute], class_attribute: Attribute) -> str:
    """SHA-256 over attribute names, kinds and value lists (relation name ignored)."""
    payload = json.dumps(
        {"features": [_attr_to_json(a) for a in features], "class": _attr_to_json(class_attribute)},
        sort_keys=True, separators=(",", ":"),
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _plain(value):
    return value.item() if isinstance(value, np.generic) else value


def model_to_dict(estimator) -> dict:
    try:
        tag = _TAGS[type(estimator)]
    except KeyError:
        raise TypeError(f"cannot serialise {type(estimator).__name__}") from None
    if tag == "adt":
        structure = estimator.model_.to_dict()
        structure["classes"] = [_plain(c) for c in structure["classes"]]
    else:
        structure = {"tree": _tree.to_dict(estimator.tree_)}
        if tag == "c45":
            structure["grown_tree"] = _tree.to_dict(estimator.grown_tree_)
    return {
        "format_version": FORMAT_VERSION,
        "algorithm": tag,
        "schema_fingerprint": schema_fingerprint(estimator.attributes_, estimator.class_attribute_),
        "attributes": [_attr_to_json(a) for a in estimator.attributes_],
        "class_attribute": _attr_to_json(estimator.class_attribute_),
        "classes": [_plain(c) for c in estimator.classes_],
        "params": estimator.get_params(),
        "model": structure,
    }


def model_from_dict(d: dict):
    if d.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported model format version {d.get('format_version')!r}")
    tag = d.get("algorithm")
    if tag not in _CLASSES:
        raise ValueError(f"unknown algorithm tag {tag!r}")
    attributes = tuple(_attr_from_json(a) for a in d["attributes"])
    class_attribute = _attr_from_json(d["class_attribute"])
    if schema_fingerprint(attributes, class_attribute) != d["schema_fingerprint"]:
        raise ValueError("model file schema does not match its fingerprint")

    est = _CLASSES[tag](**d["params"])
    est.attributes_ = attributes
    est.class_attribute_ = class_attribute
    classes = d["classes"]
    est.classes_ = np.array(classes, dtype=object) if all(isinstance(c, str) for c in classes) \
        else np.asarray(classes)
    est.n_features_in_ = len(attributes)
    structure = d["model"]
    if tag == "adt":
        est.model_ = ADTModel.from_dict(structure, attributes)
        est._pos_index = [str(c) for c in classes].index(str(est.model_.classes[1]))
    else:
        est.tree_ = _tree.from_dict(structure["tree"])
        if tag == "c45":
            est.grown_tree_ = _tree.from_dict(structure["grown_tree"])
    est.schema_fingerprint_ = d["schema_fingerprint"]
    return est


def dump_model(estimator) -> str:
    return json.dumps(model_to_dict(estimator), indent=1) + "\n"


def save_model(estimator, path: Union[str, os.PathLike]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_model(estimator))


def load_model(path: Union[str, os.PathLike]):
    with open(path, encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))


def check_schema(estimator, dataset: Dataset) -> None:
    """Raise :class:`SchemaMismatchError` unless ``dataset`` has the training schema."""
    expected = schema_fingerprint(estimator.attributes_, estimator.class_attribute_)
    actual = schema_fingerprint(dataset.feature_attributes, dataset.class_attribute)
    if expected != actual:
        raise SchemaMismatchError("dataset schema fingerprint differs from the model's")
