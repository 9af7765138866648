"""The student-retention attribute schema and record encoders.

Raw admission-form records (:class:`StudentRecord`) carry percentages; the
mining schema carries grade bands. ``generate_synthetic`` produces seeded
stand-in cohorts over the same schema.
"""

from __future__ import annotations

import csv
import math
import os
import warnings
from dataclasses import dataclass, field, fields
from typing import Iterable, Mapping, Optional, Union

import numpy as np

from .arff import Attribute, Dataset

__all__ = [
    "GRADES",
    "GMSS_VALUES",
    "RETENTION_ATTRIBUTES",
    "DEFAULT_DROPOUT_RATE",
    "StudentRecord",
    "CohortConfig",
    "encode_grade",
    "encode_gog",
    "encode_record",
    "encode_records",
    "generate_synthetic",
    "read_student_csv",
]

GRADES = ("O", "A", "B", "C", "D", "E", "F")
NOT_APPLICABLE = "NotApplicable"
GMSS_VALUES = GRADES + (NOT_APPLICABLE,)
SEXES = ("Male", "Female")
CATEGORIES = ("General", "OBC", "SC", "ST")
STREAMS = (
    "BA_with_Math",
    "BA_without_Math",
    "BSc_with_Math",
    "BSc_without_Math",
    "BCom",
    "BCA",
    "BBA",
    "BTech",
)
GOG_VALUES = ("First", "Second", "Third")
MEDIUMS = ("Hindi", "English", "Regional")
LOCATIONS = ("Rural", "Urban")
ADMISSIONS = ("UPSEE", "Direct")

RETENTION_ATTRIBUTES = (
    Attribute("Sex", SEXES),
    Attribute("Cat", CATEGORIES),
    Attribute("GSS", GRADES),
    Attribute("GMSS", GMSS_VALUES),
    Attribute("GS", STREAMS),
    Attribute("GOG", GOG_VALUES),
    Attribute("MED", MEDIUMS),
    Attribute("CL", LOCATIONS),
    Attribute("ATYPE", ADMISSIONS),
    Attribute("RET", ("0", "1")),
)

DEFAULT_DROPOUT_RATE = 34 / 432

# lower bound of each band, highest band first
_GRADE_FLOORS = (90.0, 80.0, 70.0, 60.0, 50.0, 40.0, 0.0)
_GOG_FLOORS = (60.0, 45.0, 36.0)


def encode_grade(percent: float) -> str:
    """Grade band for a percentage: [90,100] O, [80,90) A, ..., [0,40) F."""
    if not 0.0 <= percent <= 100.0:
        raise ValueError(f"percentage {percent!r} outside [0, 100]")
    for grade, floor in zip(GRADES, _GRADE_FLOORS):
        if percent >= floor:
            return grade
    raise AssertionError("unreachable")


def encode_gog(percent: float) -> str:
    """Graduation division. Below 36% is not a pass and is rejected."""
    if not 0.0 <= percent <= 100.0:
        raise ValueError(f"percentage {percent!r} outside [0, 100]")
    for label, floor in zip(GOG_VALUES, _GOG_FLOORS):
        if percent >= floor:
            return label
    raise ValueError(f"graduation percentage {percent!r} below the 36% pass mark")


def _check_choice(name: str, value, choices) -> None:
    if value not in choices:
        raise ValueError(f"{name}={value!r} not one of {choices}")


@dataclass(frozen=True)
class StudentRecord:
    sex: str
    cat: str
    ss_percent: float
    ss_math_percent: Optional[float]
    grad_stream: str
    grad_percent: float
    med: str
    cl: str
    atype: str
    ret: int

    def __post_init__(self):
        _check_choice("sex", self.sex, SEXES)
        _check_choice("cat", self.cat, CATEGORIES)
        _check_choice("grad_stream", self.grad_stream, STREAMS)
        _check_choice("med", self.med, MEDIUMS)
        _check_choice("cl", self.cl, LOCATIONS)
        _check_choice("atype", self.atype, ADMISSIONS)
        _check_choice("ret", self.ret, (0, 1))
        for name in ("ss_percent", "ss_math_percent", "grad_percent"):
            v = getattr(self, name)
            if v is not None and not 0.0 <= v <= 100.0:
                raise ValueError(f"{name}={v!r} outside [0, 100]")


def encode_record(record: StudentRecord) -> tuple[int, ...]:
    """Encode a record as an instance row over ``RETENTION_ATTRIBUTES``."""
    gmss = NOT_APPLICABLE if record.ss_math_percent is None else encode_grade(record.ss_math_percent)
    labels = (
        record.sex,
        record.cat,
        encode_grade(record.ss_percent),
        gmss,
        record.grad_stream,
        encode_gog(record.grad_percent),
        record.med,
        record.cl,
        record.atype,
        str(record.ret),
    )
    return tuple(attr.index(label) for attr, label in zip(RETENTION_ATTRIBUTES, labels))


def encode_records(records: Iterable[StudentRecord], relation: str = "ret") -> Dataset:
    return Dataset(relation, RETENTION_ATTRIBUTES, [encode_record(r) for r in records])


def read_student_csv(path: Union[str, os.PathLike]) -> list[StudentRecord]:
    """Read raw records; header names are the StudentRecord field names.

    An empty ``ss_math_percent`` cell means the student took no mathematics.
    """
    names = [f.name for f in fields(StudentRecord)]
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = set(names) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"{path}: missing columns {sorted(missing)}")
        for lineno, row in enumerate(reader, start=2):
            try:
                math_cell = row["ss_math_percent"].strip()
                records.append(
                    StudentRecord(
                        sex=row["sex"].strip(),
                        cat=row["cat"].strip(),
                        ss_percent=float(row["ss_percent"]),
                        ss_math_percent=float(math_cell) if math_cell else None,
                        grad_stream=row["grad_stream"].strip(),
                        grad_percent=float(row["grad_percent"]),
                        med=row["med"].strip(),
                        cl=row["cl"].strip(),
                        atype=row["atype"].strip(),
                        ret=int(row["ret"]),
                    )
                )
            except (ValueError, AttributeError) as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    return records


# -- synthetic cohorts -------------------------------------------------------

def _default_marginals() -> dict[str, dict[str, float]]:
    return {
        "sex": {"Male": 0.62, "Female": 0.38},
        "cat": {"General": 0.45, "OBC": 0.35, "SC": 0.15, "ST": 0.05},
        "gss": {"O": 0.04, "A": 0.16, "B": 0.30, "C": 0.28, "D": 0.15, "E": 0.06, "F": 0.01},
        "gmss": {"O": 0.05, "A": 0.15, "B": 0.25, "C": 0.22, "D": 0.10, "E": 0.05, "F": 0.02,
                 NOT_APPLICABLE: 0.16},
        "gs": {"BA_with_Math": 0.08, "BA_without_Math": 0.08, "BSc_with_Math": 0.34,
               "BSc_without_Math": 0.08, "BCom": 0.10, "BCA": 0.18, "BBA": 0.06, "BTech": 0.08},
        "gog": {"First": 0.48, "Second": 0.42, "Third": 0.10},
        "med": {"Hindi": 0.45, "English": 0.45, "Regional": 0.10},
        "cl": {"Rural": 0.55, "Urban": 0.45},
        "atype": {"UPSEE": 0.70, "Direct": 0.30},
    }


def _default_dropout_skew() -> dict[str, dict[str, float]]:
    # multiplicative tilt of each value's probability among dropouts
    return {
        "gss": {"D": 1.8, "E": 2.5, "F": 3.0, "O": 0.5},
        "gmss": {NOT_APPLICABLE: 1.6, "E": 1.5, "F": 2.0},
        "gs": {"BA_without_Math": 3.0, "BSc_without_Math": 2.0, "BSc_with_Math": 0.5, "BCA": 0.6},
        "gog": {"Second": 1.6, "Third": 3.0, "First": 0.5},
        "atype": {"Direct": 2.5},
    }


@dataclass
class CohortConfig:
    """Distributions used by :func:`generate_synthetic`.

    ``marginals`` are the value probabilities among continuing students.
    ``dropout_skew`` multiplies those probabilities for dropouts (then
    renormalised); values that are not listed keep weight 1.
    ``missing_rate`` blanks non-class cells independently.
    """

    marginals: dict[str, dict[str, float]] = field(default_factory=_default_marginals)
    dropout_skew: dict[str, dict[str, float]] = field(default_factory=_default_dropout_skew)
    missing_rate: float = 0.0


def _probabilities(labels, marginal: Mapping[str, float], skew: Optional[Mapping[str, float]]):
    p = np.array([marginal.get(v, 0.0) for v in labels], dtype=float)
    if skew:
        p = p * np.array([skew.get(v, 1.0) for v in labels])
    if p.sum() <= 0:
        raise ValueError(f"distribution over {labels} has no mass")
    return p / p.sum()


def _percent_in_band(rng: np.random.Generator, floor: float, ceiling: float) -> float:
    # two decimals, strictly inside [floor, ceiling)
    value = math.floor(rng.uniform(floor, ceiling) * 100) / 100
    return min(max(value, floor), 100.0)


_BAND_CEILINGS = dict(zip(GRADES, (100.0, 90.0, 80.0, 70.0, 60.0, 50.0, 40.0)))
_GOG_BANDS = {"First": (60.0, 100.0), "Second": (45.0, 60.0), "Third": (36.0, 45.0)}


def _sample_records(n: int, dropout_rate: float, rng: np.random.Generator,
                    config: CohortConfig) -> list[StudentRecord]:
    choices = {
        "sex": SEXES, "cat": CATEGORIES, "gss": GRADES, "gmss": GMSS_VALUES, "gs": STREAMS,
        "gog": GOG_VALUES, "med": MEDIUMS, "cl": LOCATIONS, "atype": ADMISSIONS,
    }
    tables = {}
    for key, labels in choices.items():
        marg = config.marginals[key]
        tables[key] = (
            _probabilities(labels, marg, None),
            _probabilities(labels, marg, config.dropout_skew.get(key)),
        )

    records = []
    for _ in range(n):
        dropout = rng.random() < dropout_rate
        draw = {key: labels[rng.choice(len(labels), p=tables[key][int(dropout)])]
                for key, labels in choices.items()}
        gss = draw["gss"]
        ss = _percent_in_band(rng, _GRADE_FLOORS[GRADES.index(gss)], _BAND_CEILINGS[gss])
        if draw["gmss"] == NOT_APPLICABLE:
            ss_math = None
        else:
            g = draw["gmss"]
            ss_math = _percent_in_band(rng, _GRADE_FLOORS[GRADES.index(g)], _BAND_CEILINGS[g])
        grad = _percent_in_band(rng, *_GOG_BANDS[draw["gog"]])
        records.append(
            StudentRecord(
                sex=draw["sex"], cat=draw["cat"], ss_percent=ss, ss_math_percent=ss_math,
                grad_stream=draw["gs"], grad_percent=grad, med=draw["med"], cl=draw["cl"],
                atype=draw["atype"], ret=0 if dropout else 1,
            )
        )
    return records


def generate_synthetic(n: int = 432, dropout_rate: float = DEFAULT_DROPOUT_RATE,
                       seed: int = 0, config: Optional[CohortConfig] = None) -> Dataset:
    """Draw a seeded synthetic retention cohort of ``n`` students.

    Each student's outcome is a Bernoulli(``dropout_rate``) draw; attributes
    are then sampled from class-conditional distributions (see
    :class:`CohortConfig`) and passed through :func:`encode_record`, so the
    result depends only on the arguments.
    """
    if n < 10:
        raise ValueError("n must be at least 10")
    if not 0.0 < dropout_rate < 1.0:
        raise ValueError("dropout_rate must lie in (0, 1)")
    config = config or CohortConfig()
    if not 0.0 <= config.missing_rate < 1.0:
        raise ValueError("missing_rate must lie in [0, 1)")
    if n * min(dropout_rate, 1 - dropout_rate) < 10:
        warnings.warn(
            f"expected minority class size {n * min(dropout_rate, 1 - dropout_rate):.1f} is below 10;"
            " some stratified 10-fold test folds will lack it",
            stacklevel=2,
        )
    rng = np.random.default_rng(seed)
    rows = [encode_record(r) for r in _sample_records(n, dropout_rate, rng, config)]
    if config.missing_rate > 0:
        n_feat = len(RETENTION_ATTRIBUTES) - 1
        holes = rng.random((n, n_feat)) < config.missing_rate
        rows = [tuple(None if j < n_feat and holes[i, j] else c for j, c in enumerate(row))
                for i, row in enumerate(rows)]
    return Dataset("ret", RETENTION_ATTRIBUTES, rows)
