"""Command-line front end: ``retention-trees <command> ...``.

Exit status: 0 success, 1 usage error, 2 data/format error, 3 training error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import __version__
from ._validation import SchemaMismatchError
from .adtree import ADTreeClassifier, MissingValueError
from .arff import ArffError, load_arff, write_arff
from .c45 import C45Classifier
from .evaluation import cross_validate, format_report, reports_to_json
from .id3 import ID3Classifier
from .persistence import check_schema, dump_model, load_model
from .schema import DEFAULT_DROPOUT_RATE, encode_records, generate_synthetic, read_student_csv

EXIT_USAGE, EXIT_DATA, EXIT_TRAIN = 1, 2, 3
ALGORITHMS = ("id3", "c45", "adt")
DISPLAY_NAMES = {"id3": "ID3", "c45": "C4.5", "adt": "ADT"}


class CLIError(Exception):
    def __init__(self, message: str, status: int):
        super().__init__(message)
        self.status = status


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CLIError(f"{self.prog}: {message}", EXIT_USAGE)


def make_estimator(algo: str, cf: float = 0.25, iterations: int = 10,
                   empty_branch: str = "majority"):
    if algo == "id3":
        return ID3Classifier(empty_branch=empty_branch)
    if algo == "c45":
        return C45Classifier(confidence_factor=cf)
    if algo == "adt":
        return ADTreeClassifier(n_iterations=iterations)
    raise CLIError(f"unknown algorithm {algo!r}", EXIT_USAGE)


def _read_dataset(path: str):
    try:
        return load_arff(path)
    except ArffError as exc:
        raise CLIError(f"{path}: {exc}", EXIT_DATA) from None
    except OSError as exc:
        raise CLIError(f"{path}: {exc.strerror or exc}", EXIT_DATA) from None


def _read_model(path: str):
    try:
        return load_model(path)
    except OSError as exc:
        raise CLIError(f"{path}: {exc.strerror or exc}", EXIT_DATA) from None
    except (ValueError, KeyError, TypeError) as exc:
        raise CLIError(f"{path}: invalid model file: {exc}", EXIT_DATA) from None


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_gen(args) -> None:
    try:
        data = generate_synthetic(args.n, args.dropout_rate, args.seed)
    except ValueError as exc:
        raise CLIError(str(exc), EXIT_USAGE) from None
    _emit(write_arff(data), args.out)
    dist = data.class_distribution()
    print(f"generated {len(data)} instances (seed={args.seed}, RET counts {dist})", file=sys.stderr)


def _cmd_ingest(args) -> None:
    try:
        records = read_student_csv(args.csv)
    except OSError as exc:
        raise CLIError(f"{args.csv}: {exc.strerror or exc}", EXIT_DATA) from None
    except ValueError as exc:
        raise CLIError(str(exc), EXIT_DATA) from None
    _emit(write_arff(encode_records(records, relation=args.relation)), args.out)


def _fit(estimator, data, algo: str):
    try:
        return estimator.fit(data)
    except ValueError as exc:
        raise CLIError(f"training {algo} failed: {exc}", EXIT_TRAIN) from None


def _cmd_train(args) -> None:
    data = _read_dataset(args.arff)
    model = _fit(make_estimator(args.algo, args.cf, args.iterations, args.empty_branch), data, args.algo)
    _emit(dump_model(model), args.out)


def _cmd_print(args) -> None:
    _emit(_read_model(args.model).export_text(), args.out)


def _cmd_predict(args) -> None:
    model = _read_model(args.model)
    data = _read_dataset(args.arff)
    try:
        check_schema(model, data)
        labels = model.predict(data)
        if isinstance(model, ADTreeClassifier):
            extra = model.decision_function(data)
        elif isinstance(model, C45Classifier):
            extra = model.predict_proba(data).max(axis=1)
        else:
            extra = None
    except (SchemaMismatchError, MissingValueError) as exc:
        raise CLIError(f"{args.arff}: {exc}", EXIT_DATA) from None
    lines = ["instance,predicted" + ("" if extra is None else ",score")]
    for i, label in enumerate(labels):
        row = f"{i + 1},{'?' if label is None else label}"
        if extra is not None:
            row += f",{extra[i]!r}"
        lines.append(row)
    _emit("\n".join(lines) + "\n", args.out)


def _cmd_eval(args) -> None:
    data = _read_dataset(args.arff)
    algos = ALGORITHMS if args.algo == "all" else (args.algo,)
    reports = []
    for algo in algos:
        try:
            reports.append(cross_validate(make_estimator(algo, args.cf, args.iterations,
                                                         args.empty_branch), data,
                                          k=args.folds, seed=args.seed,
                                          positive_class=args.positive_class,
                                          algorithm=DISPLAY_NAMES[algo]))
        except ValueError as exc:
            status = EXIT_USAGE if "positive class" in str(exc) or "folds" in str(exc) else EXIT_TRAIN
            raise CLIError(f"{algo}: {exc}", status) from None
    print(f"relation={data.relation} instances={len(data)} folds={args.folds} seed={args.seed} "
          f"positive_class={args.positive_class}")
    print(format_report(reports, timing=not args.no_timing), end="")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(reports_to_json(reports, timing=not args.no_timing))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="retention-trees", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common_algo(p, choices):
        p.add_argument("--algo", choices=choices, default=choices[0])
        p.add_argument("--cf", type=float, default=0.25, help="C4.5 confidence factor")
        p.add_argument("--iterations", type=int, default=10, help="ADT boosting rounds")
        p.add_argument("--empty-branch", choices=("majority", "unclassified"), default="majority",
                       help="ID3 prediction at branches unseen in training")

    p = sub.add_parser("gen", help="write a synthetic retention cohort as ARFF")
    p.add_argument("--n", type=int, default=432)
    p.add_argument("--dropout-rate", type=float, default=DEFAULT_DROPOUT_RATE)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("ingest", help="encode raw admission-form CSV as ARFF")
    p.add_argument("csv")
    p.add_argument("--relation", default="ret")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("train", help="train a model file from ARFF")
    p.add_argument("arff")
    common_algo(p, ALGORITHMS)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("print", help="render a model file as text")
    p.add_argument("model")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_print)

    p = sub.add_parser("predict", help="predict each instance of an ARFF file")
    p.add_argument("model")
    p.add_argument("arff")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("eval", help="stratified cross-validation report")
    p.add_argument("arff")
    common_algo(p, ALGORITHMS + ("all",))
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--positive-class", default="0")
    p.add_argument("--no-timing", action="store_true", help="omit build times (reproducible output)")
    p.add_argument("--out", help="also write the report as JSON")
    p.set_defaults(func=_cmd_eval)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.func(args)
    except CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.status
    return 0


if __name__ == "__main__":
    sys.exit(main())
