import io

import pytest
from hypothesis import given, settings, strategies as st

from retention_trees.arff import ArffError, Attribute, Dataset, parse_arff, write_arff

MINIMAL = """% retention
@RELATION ret
@attribute GSS {O,A,B}
@ATTRIBUTE RET {0,1}
@data
A,1
"""


def test_minimal_file():
    d = parse_arff(MINIMAL)
    assert d.relation == "ret"
    assert [a.name for a in d.attributes] == ["GSS", "RET"]
    assert d.class_index == 1
    assert d.instances == ((1, 1),)


def test_missing_token():
    d = parse_arff(MINIMAL.replace("A,1", "?,1"))
    assert d.instances[0][0] is None


def test_quoted_question_mark_is_a_value():
    text = "@relation r\n@attribute q {'?',x}\n@attribute c {a}\n@data\n'?',a\n?,a\n"
    d = parse_arff(text)
    assert d.instances == ((0, 0), (None, 0))


def test_crlf_and_stream_input():
    d = parse_arff(io.StringIO(MINIMAL.replace("\n", "\r\n")))
    assert d.instances == ((1, 1),)


def test_numeric_and_quoted_names():
    text = ("@relation 'my data'\n@attribute 'ss percent' numeric\n@attribute x real\n"
            "@attribute c {'yes sir','no, ma''am'}\n@data\n")
    with pytest.raises(ArffError):
        parse_arff(text)
    text = ("@relation 'my data'\n@attribute 'ss percent' numeric\n@attribute x REAL\n"
            "@attribute c {'yes sir','no, ma\\'am'}\n@data\n92.5, -1e3, 'no, ma\\'am'\n")
    d = parse_arff(text)
    assert d.relation == "my data"
    assert d.attributes[0] == Attribute("ss percent")
    assert d.attributes[2].values == ("yes sir", "no, ma'am")
    assert d.instances == ((92.5, -1000.0, 1),)


def test_class_distribution_398_34():
    rows = ["1"] * 398 + ["0"] * 34
    d = parse_arff("@relation ret\n@attribute RET {0,1}\n@data\n" + "\n".join(rows) + "\n")
    assert len(d) == 432
    assert d.class_distribution() == {"0": 34, "1": 398}


def test_class_index_override():
    d = parse_arff(MINIMAL, class_index=0)
    assert d.class_attribute.name == "GSS"


@pytest.mark.parametrize(
    "text, line",
    [
        ("@relation r\n@attribute a {x,y}\n@data\nz\n", 4),
        ("@relation r\n@attribute a {x,y}\n@attribute b {x}\n@data\nx\n", 5),
        ("@relation r\n@attribute a {x,y}\n@attribute a {x}\n@data\n", 3),
        ("@relation r\n@attribute a string\n@data\n", 2),
        ("@relation r\n@attribute a {x,x}\n@data\n", 2),
        ("@relation r\n@attribute a {x,y}\n@data\n{0 x}\n", 4),
        ("@relation r\n@attribute a {x,y}\n@data\n'x\n", 4),
        ("@relation r\n@attribute n numeric\n@attribute a {x}\n@data\nabc,x\n", 5),
        ("@relation r\n@bogus\n", 2),
    ],
)
def test_errors_carry_line_numbers(text, line):
    with pytest.raises(ArffError) as info:
        parse_arff(text)
    assert info.value.lineno == line
    assert f"line {line}" in str(info.value)


def test_structural_errors():
    with pytest.raises(ArffError, match="@data"):
        parse_arff("@relation r\n@attribute a {x}\n")
    with pytest.raises(ArffError, match="nominal"):
        parse_arff("@relation r\n@attribute a numeric\n@data\n1\n")


def test_empty_dataset_writes_header_only():
    d = Dataset("empty", (Attribute("a", ("x",)), Attribute("c", ("p", "q"))))
    text = write_arff(d)
    assert text.rstrip().endswith("@data")
    assert parse_arff(text) == d


def test_value_with_space_is_quoted():
    attr = Attribute("GS", ("B.A. without maths", "BCA"))
    d = Dataset("r", (attr, Attribute("RET", ("0", "1"))), [(0, 1), (1, 0)])
    text = write_arff(d)
    assert "'B.A. without maths'" in text
    assert parse_arff(text) == d


def test_lf_emitted():
    d = parse_arff(MINIMAL)
    assert "\r" not in write_arff(d)


def test_dataset_invariants():
    a = Attribute("a", ("x", "y"))
    c = Attribute("c", ("p",))
    with pytest.raises(ValueError):
        Dataset("r", (a, c), [(2, 0)])
    with pytest.raises(ValueError):
        Dataset("r", (a, c), [(0,)])
    with pytest.raises(ValueError):
        Dataset("r", (a, a), [])
    with pytest.raises(ValueError):
        Dataset("r", (a, Attribute("n")), [])
    with pytest.raises(ValueError):
        Attribute("e", ())


labels = st.text(st.characters(blacklist_categories=("Cs", "Cc")), min_size=1, max_size=8).filter(
    lambda s: s.strip() == s)


@st.composite
def datasets(draw):
    n_attrs = draw(st.integers(1, 4))
    attrs = []
    for j in range(n_attrs):
        if j < n_attrs - 1 and draw(st.booleans()):
            attrs.append(Attribute(f"n{j}"))
        else:
            attrs.append(Attribute(draw(labels) + f"#{j}", tuple(draw(st.lists(labels, min_size=1, max_size=4, unique=True)))))
    rows = []
    for _ in range(draw(st.integers(0, 6))):
        row = []
        for a in attrs:
            if draw(st.booleans()) and draw(st.booleans()):
                row.append(None)
            elif a.is_nominal:
                row.append(draw(st.integers(0, len(a.values) - 1)))
            else:
                row.append(draw(st.floats(allow_nan=False, allow_infinity=False)))
        rows.append(tuple(row))
    return Dataset(draw(labels), attrs, rows)


@settings(max_examples=200, deadline=None)
@given(datasets())
def test_round_trip_property(d):
    assert parse_arff(write_arff(d)) == d


def test_parse_is_deterministic():
    assert parse_arff(MINIMAL) == parse_arff(MINIMAL)


def test_unicode_whitespace_and_separators_round_trip():
    a = Attribute("a\xa0b#0", ("x y", "z\x85"))
    d = Dataset("r s", (a, Attribute("c", ("0", "1"))), [(0, 1), (1, 0)])
    assert parse_arff(write_arff(d)) == d
