import pytest

from balab.io import (
    FormatError,
    algebra_notes,
    format_algebra,
    format_base,
    format_condition,
    format_family,
    format_setmap,
    parse_algebra,
    parse_base,
    parse_condition,
    parse_family,
    parse_setmap,
    parse_strings,
)
from conftest import DATA, GOLDEN

ALGEBRAS = ["algebra.txt", "free3.txt", "chain4.txt"]
CONDITIONS = ["q1.txt", "q2.txt", "p1.txt", "p2.txt"]


@pytest.mark.parametrize("name", ALGEBRAS)
def test_algebra_round_trip(name):
    once = format_algebra(parse_algebra((DATA / name).read_text()))
    assert format_algebra(parse_algebra(once)) == once


def test_golden_algebras_parse():
    for name in ("base6_algebra.txt", "amalgam_disjoint_algebra.txt"):
        text = (GOLDEN / name).read_text()
        assert format_algebra(parse_algebra(text)) == text


@pytest.mark.parametrize("name", ["base.txt", "base6.txt"])
def test_base_round_trip(name):
    text = (DATA / name).read_text()
    once = format_base(parse_base(text))
    assert format_base(parse_base(once)) == once
    assert parse_base(once) == parse_base(text)


@pytest.mark.parametrize("name", CONDITIONS)
def test_condition_round_trip(name):
    cf = parse_condition((DATA / name).read_text())
    once = format_condition(cf.condition, cf.params)
    again = parse_condition(once)
    assert again == cf and format_condition(again.condition, again.params) == once


def test_family_and_setmap_round_trip():
    fam = parse_family((DATA / "family.txt").read_text())
    assert fam == [[1, 2], [1, 3], [1, 4], [2, 5]]
    assert parse_family(format_family(fam)) == fam
    assert parse_family("-\n1\n") == [[], [1]]
    m = parse_setmap((DATA / "setmap.txt").read_text())
    assert m == {0: [1], 1: [], 2: [], 3: [0]}
    assert parse_setmap(format_setmap(m)) == m


def test_strings_files():
    assert parse_strings((DATA / "nu.txt").read_text())
    assert parse_strings("-\n01\n") == [(), (0, 1)]
    with pytest.raises(FormatError):
        parse_strings("0a\n")


def test_duplicate_rows_are_noted():
    alg = parse_algebra("algebra v1\nw 2\nf 10\nf 10 # again\nf 01\n")
    assert alg.bitstrings() == ["01", "10"]
    assert algebra_notes(alg) == ["dropped 1 duplicate row(s)"]
    assert algebra_notes(parse_algebra("algebra v1\nw 1\nf 1\n")) == []


def test_u_out_of_order_reports_line():
    text = "qcond v1\nchi 2\n\nw 0\nu (0,1) (0,0)\nf (0,0): 10\nf (0,1): 01\n"
    with pytest.raises(FormatError) as e:
        parse_condition(text)
    assert e.value.line == 5


@pytest.mark.parametrize(
    "text, line",
    [
        ("algebra v2\nw 1\n", 1),
        ("algebra v1\nw 2\nf 102\n", 3),
        ("algebra v1\nf 10\n", 2),
        ("algebra v1\nw 1\nz 1\n", 3),
    ],
)
def test_algebra_format_errors(text, line):
    with pytest.raises(FormatError) as e:
        parse_algebra(text)
    assert e.value.line == line


def test_unknown_headers():
    for parse in (parse_algebra, parse_base, parse_condition):
        with pytest.raises(FormatError) as e:
            parse("nonsense v9\n")
        assert "unknown header" in str(e.value)
    with pytest.raises(FormatError):
        parse_algebra("")


def test_condition_errors():
    head = "pcond v1\nchi 2\nw 0\nu (0,0) (0,1)\n"
    with pytest.raises(FormatError, match="no f line"):
        parse_condition(head + "f (0,0): 10\n")
    with pytest.raises(FormatError, match="not in u"):
        parse_condition(head + "f (1,0): 10\n")
    with pytest.raises(FormatError, match="length 2"):
        parse_condition(head + "f (0,0): 1\n")
    with pytest.raises(FormatError) as e:
        parse_condition("qcond v1\nchi 2\nw 0\nu (0,0) x\n")
    assert e.value.line == 4 and e.value.col is not None


def test_default_cap_is_size_of_u():
    cf = parse_condition("qcond v1\nchi 2\nw 0\nu (0,0) (0,1)\nf (0,0): 10\nf (0,1): 01\n")
    assert cf.params.ucap == 2


def test_setmap_errors():
    with pytest.raises(FormatError):
        parse_setmap("1 2 3\n")
    with pytest.raises(FormatError):
        parse_setmap("1: 2\n1: 3\n")


def test_base_errors():
    with pytest.raises(FormatError):
        parse_base("base v1\ndepth 2\nalphabet 2\n")
    with pytest.raises(FormatError):
        parse_base("base v1\ndepth 2\nalphabet 2\nchi 0 1\neta 1 00\n")
