"""Exit criteria for the package, one test per criterion.

Run with ``pytest tests/test_acceptance.py``; the terminal summary lists a
PASS/FAIL line per criterion.
"""

import json
import string
from decimal import Decimal

import numpy as np
import pytest

from helpers import nominal_dataset, random_nominal_dataset
from oracles import brute_stats
from retention_trees import _tree
from retention_trees.adtree import ADTreeClassifier, score_instance
from retention_trees.arff import Attribute, Dataset, parse_arff, write_arff
from retention_trees.c45 import C45Classifier, prune
from retention_trees.cli import main
from retention_trees.evaluation import ConfusionMatrix, cross_validate, stratified_folds
from retention_trees.id3 import ID3Classifier
from retention_trees.impurity import entropy, gain_ratio, info_gain, split_info
from retention_trees.persistence import dump_model, model_from_dict
from retention_trees.schema import RETENTION_ATTRIBUTES, generate_synthetic
from test_adtree import instance, published_model
from test_impurity import ID_VS_BINARY_ROWS

criterion = pytest.mark.criterion


@criterion(1, "impurity statistics match a brute-force recount within 1e-12")
def test_impurity_oracle_equivalence():
    rng = np.random.default_rng(2024)
    checked = 0
    for _ in range(10_000):
        n = int(rng.integers(1, 9))
        X = rng.integers(0, 2, size=(n, 3))
        y = rng.integers(0, 2, size=n)
        rows = [tuple(r) for r in X.tolist()]
        labels = y.tolist()
        Xf = X.astype(float)
        for a in range(3):
            h, g, si, r = brute_stats(rows, labels, a)
            assert abs(entropy(np.bincount(y, minlength=2)) - h) <= 1e-12
            assert abs(info_gain(Xf[:, a], y) - g) <= 1e-12
            assert abs(split_info(Xf[:, a]) - si) <= 1e-12
            assert abs(gain_ratio(Xf[:, a], y) - r) <= 1e-12
        checked += 1
    assert checked == 10_000


@criterion(2, "entropy of (398, 34) is 0.3976 bits within 1e-3")
def test_entropy_spot_value():
    # independently recomputed with mpmath at 40 digits: 0.39759505869383017...
    assert abs(entropy([398, 34]) - 0.3976) <= 1e-3


def _identity_holds(cm: ConfusionMatrix, n: int):
    assert cm.correct + cm.incorrect + cm.unclassified == cm.total == n
    pct = [100 * cm.correct / n, 100 * cm.incorrect / n, 100 * cm.unclassified / n]
    assert abs(sum(pct) - 100.0) <= 1e-9


@criterion(3, "ID3 memorizes consistent data; correct + incorrect + unclassified = 100%")
def test_id3_memorization():
    rng = np.random.default_rng(7)
    for _ in range(200):
        n = int(rng.integers(1, 33))
        arities = [int(k) for k in rng.integers(2, 4, size=int(rng.integers(1, 5)))]
        d = random_nominal_dataset(rng, n, arities, int(rng.integers(2, 4)), consistent=True)
        clf = ID3Classifier().fit(d)
        X, y = d.to_arrays()
        pred = clf.predict(d)
        labels = d.class_attribute.values
        assert all(p == labels[c] for p, c in zip(pred, y))

        cm = ConfusionMatrix(labels)
        for c, p in zip(y, pred):
            cm.add(c, labels.index(p))
        _identity_holds(cm, n)
        assert cm.correct == n

        # the same model on partly missing inputs exercises the unclassified column
        Xm = X.copy()
        Xm[rng.random(Xm.shape) < 0.3] = np.nan
        cm = ConfusionMatrix(labels)
        for c, p in zip(y, clf.predict(Xm)):
            cm.add(c, None if p is None else labels.index(p))
        _identity_holds(cm, n)

        if n >= 2:
            report = cross_validate(ID3Classifier(), d, k=2, seed=int(rng.integers(100)))
            _identity_holds(report.confusion, n)


@criterion(4, "C4.5 pruning never grows the tree, is idempotent; gain ratio picks the binary root")
def test_c45_pruning_laws():
    rng = np.random.default_rng(11)
    for _ in range(200):
        n = int(rng.integers(4, 80))
        d = random_nominal_dataset(rng, n, [2, 3, 4, 2], int(rng.integers(2, 4)))
        grown = C45Classifier(prune=False, min_leaf_weight=float(rng.integers(1, 3))).fit(d).tree_
        pruned = prune(grown, 0.25)
        assert _tree.node_count(pruned) <= _tree.node_count(grown)
        assert _tree.to_dict(prune(pruned, 0.25)) == _tree.to_dict(pruned)

    d = nominal_dataset(ID_VS_BINARY_ROWS, [6, 2, 2, 2])
    assert ID3Classifier().fit(d).tree_.attribute == 0
    assert C45Classifier(min_leaf_weight=1, prune=False).fit(d).tree_.attribute == 1


@criterion(5, "ADT worked sum 0.576 -> class 1; published model scores -1.955")
def test_adt_arithmetic_replication():
    addends = [Decimal("0.483"), Decimal("0.15"), Decimal("-0.218"), Decimal("0.125"), Decimal("0.036")]
    assert sum(addends) == Decimal("0.576")

    clf = ADTreeClassifier()
    clf.attributes_ = RETENTION_ATTRIBUTES[:-1]
    clf.classes_ = np.array(["0", "1"], dtype=object)
    from retention_trees.adtree import ADTModel, Splitter
    # the five addends as root plus four always-reached true branches
    clf.model_ = ADTModel(0.483, tuple(Splitter(i, (), 0, 0, float(a), 0.0)
                                       for i, a in enumerate(addends[1:], start=1)),
                          clf.attributes_, ("0", "1"))
    x = np.zeros((1, len(clf.attributes_)))
    assert abs(clf.decision_function(x)[0] - 0.576) <= 1e-12
    assert clf.predict(x)[0] == "1"

    score = score_instance(published_model(), instance(GSS="A", MED="Hindi", GOG="Second"))
    assert abs(score - (-1.955)) <= 1e-9


@criterion(6, "ADT boosting weight is non-increasing, T=10 gives 10 splitters, class = sign(score)")
def test_adt_boosting_invariants():
    rng = np.random.default_rng(5)
    done = 0
    while done < 100:
        d = random_nominal_dataset(rng, int(rng.integers(4, 40)), [2, 3, 2, 4], 2)
        if len(set(r[-1] for r in d.instances)) < 2:
            continue
        clf = ADTreeClassifier(n_iterations=int(rng.integers(0, 11))).fit(d)
        totals = np.array(clf.trace_.weight_totals)
        assert np.all(np.diff(totals) <= 1e-9)
        assert np.allclose(totals[1:], clf.trace_.induced_totals, rtol=0, atol=1e-9)
        scores = clf.decision_function(d)
        neg, pos = clf.model_.classes
        assert all(p == (pos if s >= 0 else neg) for p, s in zip(clf.predict(d), scores))
        done += 1

    cohort = generate_synthetic(432, 34 / 432, seed=42)
    clf = ADTreeClassifier(n_iterations=10).fit(cohort)
    assert len(clf.model_.splitters) == 10
    scores = clf.decision_function(cohort)
    assert all(p == ("1" if s >= 0 else "0") for p, s in zip(clf.predict(cohort), scores))


@criterion(7, "stratified 10-fold on 432/34: 3-4 positives per fold, a partition, deterministic")
def test_stratified_cv():
    rows = [(i % 3, 0) for i in range(34)] + [(i % 3, 1) for i in range(398)]
    d = nominal_dataset(rows, [3])
    folds = stratified_folds(d, 10, seed=7)
    _, y = d.to_arrays()
    assert sorted(np.concatenate(folds).tolist()) == list(range(432))
    assert all(3 <= np.count_nonzero(y[f] == 0) <= 4 for f in folds)
    again = stratified_folds(d, 10, seed=7)
    assert all(np.array_equal(a, b) for a, b in zip(folds, again))


def _random_label(rng):
    alphabet = string.ascii_letters + string.digits + " ,'%{}?._-\\\"é"
    while True:
        s = "".join(rng.choice(list(alphabet), size=int(rng.integers(1, 7))))
        if s.strip() == s:
            return s


def _random_dataset(rng):
    n_attrs = int(rng.integers(1, 6))
    attrs = []
    for j in range(n_attrs):
        if j < n_attrs - 1 and rng.random() < 0.3:
            attrs.append(Attribute(f"{_random_label(rng)}_{j}"))
        else:
            values = []
            while len(values) < int(rng.integers(1, 5)):
                v = _random_label(rng)
                if v not in values:
                    values.append(v)
            attrs.append(Attribute(f"{_random_label(rng)}_{j}", tuple(values)))
    rows = []
    for _ in range(int(rng.integers(0, 12))):
        row = []
        for a in attrs:
            if rng.random() < 0.15:
                row.append(None)
            elif a.is_nominal:
                row.append(int(rng.integers(len(a.values))))
            else:
                row.append(float(rng.choice([rng.normal() * 10.0 ** int(rng.integers(-5, 6)), rng.integers(-50, 50)])))
        rows.append(tuple(row))
    return Dataset(_random_label(rng), attrs, rows)


@criterion(8, "ARFF round trip on 500 random datasets")
def test_arff_round_trip():
    rng = np.random.default_rng(8)
    for _ in range(500):
        d = _random_dataset(rng)
        assert parse_arff(write_arff(d)) == d


def _strip_timing(table: str) -> list[list[str]]:
    rows = [line.split() for line in table.splitlines()]
    return [r[:-1] for r in rows[2:]] + [rows[0]]


@criterion(9, "gen -> eval --algo all runs, has the report columns, reruns identically")
def test_pipeline_smoke(tmp_path, capsys):
    data = tmp_path / "ret.arff"
    assert main(["gen", "--n", "432", "--seed", "42", "--out", str(data)]) == 0
    runs = []
    for i in range(2):
        capsys.readouterr()
        out = tmp_path / f"report{i}.json"
        assert main(["eval", "--algo", "all", "--folds", "10", "--seed", "7", "--out", str(out), str(data)]) == 0
        table = capsys.readouterr().out
        runs.append((table, json.loads(out.read_text())))

    table, records = runs[0]
    header = table.splitlines()[1]
    for column in ("Correctly Classified", "Incorrectly Classified", "Precision", "Recall", "Build Time (s)"):
        assert column in header
    assert [r["algorithm"] for r in records] == ["ID3", "C4.5", "ADT"]
    for r in records:
        assert {"algorithm", "accuracy_pct", "incorrect_pct", "unclassified_pct", "precision",
                "recall", "build_time_s", "k", "seed"} <= set(r)
        assert r["k"] == 10 and r["seed"] == 7

    def without_time(recs):
        return [{k: v for k, v in r.items() if k != "build_time_s"} for r in recs]

    assert without_time(runs[0][1]) == without_time(runs[1][1])
    assert runs[0][0].splitlines()[0] == runs[1][0].splitlines()[0]
    assert _strip_timing(runs[0][0]) == _strip_timing(runs[1][0])


@criterion(10, "save/load/predict equals in-process predict on 1,000 random instances")
def test_persistence_fidelity():
    rng = np.random.default_rng(10)
    cohort = generate_synthetic(432, 34 / 432, seed=42)
    feats = RETENTION_ATTRIBUTES[:-1]
    X = np.column_stack([rng.integers(0, len(a.values), size=1000) for a in feats]).astype(float)
    Xm = X.copy()
    Xm[rng.random(X.shape) < 0.1] = np.nan
    for est, inputs in ((ID3Classifier(), Xm), (C45Classifier(), Xm), (ADTreeClassifier(), X)):
        est.fit(cohort)
        loaded = model_from_dict(json.loads(dump_model(est)))
        assert list(loaded.predict(inputs)) == list(est.predict(inputs))
        if isinstance(est, C45Classifier):
            assert np.array_equal(loaded.predict_proba(inputs), est.predict_proba(inputs))
        if isinstance(est, ADTreeClassifier):
            assert np.array_equal(loaded.decision_function(inputs), est.decision_function(inputs))
