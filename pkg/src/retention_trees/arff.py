"""Reading and writing datasets in a WEKA-compatible subset of ARFF.

Supported: ``@relation``, nominal (``{a,b,...}``) and numeric/real/integer
attributes, ``@data`` rows, ``%`` comments, ``?`` for missing cells and
single- or double-quoted tokens. Sparse rows, date, string and relational
attributes are rejected.

Cells inside an instance are stored as ``int`` (index into the attribute's
value list), ``float`` (numeric attributes) or ``None`` (missing).
"""

from __future__ import annotations

import re
import io
import os
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

import numpy as np

__all__ = [
    "ArffError",
    "Attribute",
    "Dataset",
    "parse_arff",
    "write_arff",
    "load_arff",
    "save_arff",
]

Cell = Union[int, float, None]

_NUMERIC_TYPES = ("numeric", "real", "integer")
_SPECIAL = set(" \t,'\"%{}\\")
_LINE_BREAK = re.compile(r"\r\n?|\n")


class ArffError(ValueError):
    """Malformed ARFF input. ``lineno`` is 1-based, or None if unknown."""

    def __init__(self, message: str, lineno: Optional[int] = None):
        self.lineno = lineno
        self.message = message
        super().__init__(f"line {lineno}: {message}" if lineno else message)


@dataclass(frozen=True)
class Attribute:
    """A column declaration. ``values`` is None for numeric attributes."""

    name: str
    values: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if self.values is not None:
            object.__setattr__(self, "values", tuple(self.values))
            if not self.values:
                raise ValueError(f"nominal attribute {self.name!r} has no values")
            if len(set(self.values)) != len(self.values):
                raise ValueError(f"nominal attribute {self.name!r} has duplicate values")

    @property
    def is_nominal(self) -> bool:
        return self.values is not None

    @property
    def is_numeric(self) -> bool:
        return self.values is None

    def index(self, label: str) -> int:
        try:
            return self.values.index(label)
        except (ValueError, AttributeError):
            raise ValueError(f"{label!r} is not a declared value of {self.name!r}") from None


@dataclass(frozen=True)
class Dataset:
    """An immutable table: attribute declarations plus instance rows.

    ``class_index`` may be given negative (``-1`` is the last attribute); it is
    normalised to a non-negative index on construction.
    """

    relation: str
    attributes: tuple[Attribute, ...]
    instances: tuple[tuple[Cell, ...], ...] = field(default=())
    class_index: int = -1

    def __post_init__(self):
        attrs = tuple(self.attributes)
        object.__setattr__(self, "attributes", attrs)
        if not attrs:
            raise ValueError("dataset needs at least one attribute")
        names = [a.name for a in attrs]
        if len(set(names)) != len(names):
            raise ValueError("attribute names must be unique")
        ci = self.class_index
        if not -len(attrs) <= ci < len(attrs):
            raise ValueError(f"class_index {ci} out of range")
        ci %= len(attrs)
        object.__setattr__(self, "class_index", ci)
        if not attrs[ci].is_nominal:
            raise ValueError(f"class attribute {attrs[ci].name!r} must be nominal")
        rows = tuple(tuple(r) for r in self.instances)
        for i, row in enumerate(rows):
            _check_row(row, attrs, i)
        object.__setattr__(self, "instances", rows)

    def __len__(self) -> int:
        return len(self.instances)

    @property
    def class_attribute(self) -> Attribute:
        return self.attributes[self.class_index]

    @property
    def feature_indices(self) -> list[int]:
        return [i for i in range(len(self.attributes)) if i != self.class_index]

    @property
    def feature_attributes(self) -> tuple[Attribute, ...]:
        return tuple(self.attributes[i] for i in self.feature_indices)

    def with_class_index(self, class_index: int) -> "Dataset":
        return Dataset(self.relation, self.attributes, self.instances, class_index)

    def subset(self, indices: Iterable[int]) -> "Dataset":
        rows = [self.instances[i] for i in indices]
        return Dataset(self.relation, self.attributes, rows, self.class_index)

    def column(self, index: int) -> np.ndarray:
        """Attribute ``index`` as floats; nominal cells become their code, missing NaN."""
        return np.array(
            [np.nan if r[index] is None else float(r[index]) for r in self.instances],
            dtype=np.float64,
        )

    def to_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Feature matrix (NaN for missing) and class codes (-1 for missing)."""
        feats = self.feature_indices
        X = np.full((len(self.instances), len(feats)), np.nan)
        y = np.empty(len(self.instances), dtype=np.intp)
        ci = self.class_index
        for i, row in enumerate(self.instances):
            for j, a in enumerate(feats):
                if row[a] is not None:
                    X[i, j] = row[a]
            y[i] = -1 if row[ci] is None else row[ci]
        return X, y

    def class_distribution(self) -> dict[str, int]:
        """Count of instances per declared class label (missing labels skipped)."""
        labels = self.class_attribute.values
        counts = {label: 0 for label in labels}
        for row in self.instances:
            c = row[self.class_index]
            if c is not None:
                counts[labels[c]] += 1
        return counts


def _check_row(row: Sequence[Cell], attrs: Sequence[Attribute], i: int) -> None:
    if len(row) != len(attrs):
        raise ValueError(f"instance {i} has {len(row)} cells, expected {len(attrs)}")
    for cell, attr in zip(row, attrs):
        if cell is None:
            continue
        if attr.is_nominal:
            if isinstance(cell, (bool, float)) or not isinstance(cell, (int, np.integer)):
                raise ValueError(f"instance {i}: nominal cell for {attr.name!r} must be an int index")
            if not 0 <= cell < len(attr.values):
                raise ValueError(f"instance {i}: index {cell} out of range for {attr.name!r}")
        elif not isinstance(cell, (int, float, np.integer, np.floating)) or isinstance(cell, bool):
            raise ValueError(f"instance {i}: numeric cell for {attr.name!r} must be a number")
        elif cell != cell:
            raise ValueError(f"instance {i}: NaN in {attr.name!r}; use None for missing")


# -- tokenising --------------------------------------------------------------

def _split_tokens(text: str, lineno: int) -> list[tuple[str, bool]]:
    """Split a comma-separated list into (token, was_quoted) pairs."""
    tokens: list[tuple[str, bool]] = []
    i, n = 0, len(text)
    while True:
        while i < n and text[i] in " \t":
            i += 1
        if i < n and text[i] in "'\"":
            quote = text[i]
            i += 1
            buf = []
            while True:
                if i >= n:
                    raise ArffError("unterminated quoted token", lineno)
                ch = text[i]
                if ch == "\\" and i + 1 < n:
                    buf.append(text[i + 1])
                    i += 2
                    continue
                if ch == quote:
                    i += 1
                    break
                buf.append(ch)
                i += 1
            tokens.append(("".join(buf), True))
            while i < n and text[i] in " \t":
                i += 1
        else:
            start = i
            while i < n and text[i] != ",":
                if text[i] in "'\"":
                    raise ArffError("quote inside unquoted token", lineno)
                i += 1
            token = text[start:i].strip()
            if not token:
                raise ArffError("empty token", lineno)
            tokens.append((token, False))
        if i >= n:
            return tokens
        if text[i] != ",":
            raise ArffError(f"expected ',' at column {i + 1}", lineno)
        i += 1


def _leading_token(text: str, lineno: int) -> tuple[str, str]:
    """Split off one (possibly quoted) token; return (token, remainder)."""
    text = text.lstrip()
    if not text:
        raise ArffError("missing attribute name", lineno)
    if text[0] in "'\"":
        quote = text[0]
        buf, i = [], 1
        while i < len(text):
            ch = text[i]
            if ch == "\\" and i + 1 < len(text):
                buf.append(text[i + 1])
                i += 2
                continue
            if ch == quote:
                return "".join(buf), text[i + 1:]
            buf.append(ch)
            i += 1
        raise ArffError("unterminated quoted name", lineno)
    parts = text.split(None, 1)
    return parts[0], parts[1] if len(parts) > 1 else ""


def _parse_attribute(rest: str, lineno: int) -> Attribute:
    name, type_spec = _leading_token(rest, lineno)
    type_spec = type_spec.strip()
    if type_spec.startswith("{"):
        if not type_spec.endswith("}"):
            raise ArffError("nominal specification missing closing '}'", lineno)
        inner = type_spec[1:-1]
        if not inner.strip():
            raise ArffError(f"nominal attribute {name!r} has no values", lineno)
        values = [tok for tok, _ in _split_tokens(inner, lineno)]
        if len(set(values)) != len(values):
            raise ArffError(f"duplicate nominal value in {name!r}", lineno)
        return Attribute(name, tuple(values))
    if type_spec.lower() in _NUMERIC_TYPES:
        return Attribute(name)
    raise ArffError(f"unsupported attribute type {type_spec!r}", lineno)


def parse_arff(text: Union[str, io.TextIOBase], class_index: int = -1) -> Dataset:
    """Parse ARFF text (or a text stream) into a :class:`Dataset`.

    Raises :class:`ArffError` with the offending line number on any syntax
    error, undeclared nominal value or arity mismatch; nothing is returned
    for partially valid input.
    """
    if not isinstance(text, str):
        text = text.read()
    if text.startswith("﻿"):
        text = text[1:]

    relation: Optional[str] = None
    attributes: list[Attribute] = []
    rows: list[tuple[Cell, ...]] = []
    in_data = False

    for lineno, raw in enumerate(_LINE_BREAK.split(text), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if not in_data:
            if not line.startswith("@"):
                raise ArffError(f"expected a header declaration, got {line[:30]!r}", lineno)
            keyword, _, rest = line.replace("\t", " ", 1).partition(" ")
            keyword = keyword.lower()
            if keyword == "@relation":
                if relation is not None:
                    raise ArffError("duplicate @relation", lineno)
                if attributes:
                    raise ArffError("@relation must precede @attribute", lineno)
                relation, _ = _leading_token(rest, lineno)
            elif keyword == "@attribute":
                if relation is None:
                    raise ArffError("@attribute before @relation", lineno)
                attr = _parse_attribute(rest, lineno)
                if any(a.name == attr.name for a in attributes):
                    raise ArffError(f"duplicate attribute name {attr.name!r}", lineno)
                attributes.append(attr)
            elif keyword == "@data":
                if not attributes:
                    raise ArffError("@data before any @attribute", lineno)
                in_data = True
            else:
                raise ArffError(f"unknown declaration {keyword!r}", lineno)
            continue

        if line.startswith("{"):
            raise ArffError("sparse rows are not supported", lineno)
        tokens = _split_tokens(line, lineno)
        if len(tokens) != len(attributes):
            raise ArffError(f"row has {len(tokens)} values, expected {len(attributes)}", lineno)
        row: list[Cell] = []
        for (tok, quoted), attr in zip(tokens, attributes):
            if tok == "?" and not quoted:
                row.append(None)
            elif attr.is_nominal:
                try:
                    row.append(attr.values.index(tok))
                except ValueError:
                    raise ArffError(f"undeclared value {tok!r} for attribute {attr.name!r}", lineno) from None
            else:
                try:
                    row.append(float(tok))
                except ValueError:
                    raise ArffError(f"bad numeric value {tok!r} for {attr.name!r}", lineno) from None
        rows.append(tuple(row))

    if relation is None:
        raise ArffError("missing @relation")
    if not in_data:
        raise ArffError("missing @data section")
    try:
        return Dataset(relation, tuple(attributes), tuple(rows), class_index)
    except ValueError as exc:
        raise ArffError(str(exc)) from None


def _quote(token: str) -> str:
    if token and token != "?" and not any(ch in _SPECIAL or ch.isspace() for ch in token):
        return token
    return "'" + token.replace("\\", "\\\\").replace("'", "\\'") + "'"


def _format_number(value: float) -> str:
    v = float(value)
    if v.is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def write_arff(dataset: Dataset) -> str:
    """Serialise ``dataset``; ``parse_arff`` of the result reproduces it."""
    out = [f"@relation {_quote(dataset.relation)}", ""]
    for attr in dataset.attributes:
        if attr.is_nominal:
            spec = "{" + ",".join(_quote(v) for v in attr.values) + "}"
        else:
            spec = "numeric"
        out.append(f"@attribute {_quote(attr.name)} {spec}")
    out.extend(["", "@data"])
    for row in dataset.instances:
        cells = []
        for cell, attr in zip(row, dataset.attributes):
            if cell is None:
                cells.append("?")
            elif attr.is_nominal:
                cells.append(_quote(attr.values[cell]))
            else:
                cells.append(_format_number(cell))
        out.append(",".join(cells))
    return "\n".join(out) + "\n"


def load_arff(path: Union[str, os.PathLike], class_index: int = -1) -> Dataset:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_arff(fh.read(), class_index=class_index)


def save_arff(dataset: Dataset, path: Union[str, os.PathLike]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(write_arff(dataset))
