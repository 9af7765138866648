"""Split/leaf tree structure shared by the ID3 and C4.5 estimators."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .arff import Attribute


@dataclass
class Node:
    """A tree node; a leaf when ``attribute`` is None.

    ``counts`` holds the (possibly fractional) training class weights that
    reached the node. Nominal splits have one child per declared value;
    numeric splits have ``[<= threshold, > threshold]``.
    """

    counts: np.ndarray
    label: int
    attribute: Optional[int] = None
    threshold: Optional[float] = None
    children: list["Node"] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return self.attribute is None

    @property
    def weight(self) -> float:
        return float(self.counts.sum())


def majority(counts: np.ndarray, fallback: int = 0) -> int:
    """Index of the largest count; ties go to the lowest index."""
    if counts.sum() <= 0:
        return fallback
    return int(np.argmax(counts))


def node_count(node: Node) -> int:
    return 1 + sum(node_count(c) for c in node.children)


def leaf_count(node: Node) -> int:
    if node.is_leaf:
        return 1
    return sum(leaf_count(c) for c in node.children)


def depth(node: Node) -> int:
    if node.is_leaf:
        return 0
    return 1 + max(depth(c) for c in node.children)


def branch_index(node: Node, value: float) -> Optional[int]:
    """Child index an attribute value routes to, or None when it is missing."""
    if np.isnan(value):
        return None
    if node.threshold is not None:
        return 0 if value <= node.threshold else 1
    return int(value)


def path_to_leaf(node: Node, x: np.ndarray) -> Optional[list[Node]]:
    """Nodes visited by strict single-path traversal; None if a split value is missing."""
    path = [node]
    while not node.is_leaf:
        b = branch_index(node, x[node.attribute])
        if b is None:
            return None
        node = node.children[b]
        path.append(node)
    return path


def _fmt_weight(w: float) -> str:
    return str(int(w)) if float(w).is_integer() else f"{w:.2f}"


def _fmt_threshold(t: float) -> str:
    return f"{t:.6g}"


def render(root: Node, attributes: Sequence[Attribute], classes: Sequence[str]) -> str:
    """WEKA-like text: one test per line, ``|  `` per level, leaves ``: label (n)``."""
    if root.is_leaf:
        return f": {classes[root.label]} ({_fmt_weight(root.weight)})\n"
    lines: list[str] = []

    def walk(node: Node, level: int) -> None:
        attr = attributes[node.attribute]
        for b, child in enumerate(node.children):
            if node.threshold is not None:
                op = "<=" if b == 0 else ">"
                test = f"{attr.name} {op} {_fmt_threshold(node.threshold)}"
            else:
                test = f"{attr.name} = {attr.values[b]}"
            prefix = "|  " * level + test
            if child.is_leaf:
                lines.append(f"{prefix}: {classes[child.label]} ({_fmt_weight(child.weight)})")
            else:
                lines.append(prefix)
                walk(child, level + 1)

    walk(root, 0)
    return "\n".join(lines) + "\n"


def to_dict(node: Node) -> dict:
    d = {"counts": [float(c) for c in node.counts], "label": node.label}
    if not node.is_leaf:
        d["attribute"] = node.attribute
        if node.threshold is not None:
            d["threshold"] = float(node.threshold)
        d["children"] = [to_dict(c) for c in node.children]
    return d


def from_dict(d: dict) -> Node:
    return Node(
        counts=np.array(d["counts"], dtype=np.float64),
        label=int(d["label"]),
        attribute=d.get("attribute"),
        threshold=d.get("threshold"),
        children=[from_dict(c) for c in d.get("children", [])],
    )
