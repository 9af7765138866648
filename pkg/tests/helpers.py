"""Dataset builders shared by the tests."""

from retention_trees.arff import Attribute, Dataset


def nominal_dataset(rows, arities, n_classes=2, relation="t"):
    """Dataset from rows of integer codes; the last column is the class."""
    attrs = [Attribute(f"a{j}", tuple(f"v{v}" for v in range(k))) for j, k in enumerate(arities)]
    attrs.append(Attribute("class", tuple(f"c{c}" for c in range(n_classes))))
    return Dataset(relation, attrs, [tuple(int(c) for c in r) for r in rows])


def random_nominal_dataset(rng, n, arities, n_classes=2, consistent=False):
    rows = []
    label_of = {}
    for _ in range(n):
        x = tuple(int(rng.integers(k)) for k in arities)
        if consistent and x in label_of:
            c = label_of[x]
        else:
            c = int(rng.integers(n_classes))
            label_of[x] = c
        rows.append(x + (c,))
    return nominal_dataset(rows, arities, n_classes)
