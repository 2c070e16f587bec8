from itertools import product

import pytest
from hypothesis import given, strategies as st

from balab.algebra import row_from_bits
from balab.terms import (
    ONE,
    ZERO,
    And,
    Const,
    GeneratorRangeError,
    Not,
    Or,
    TermSyntaxError,
    Var,
    check_range,
    conj,
    disj,
    dnf_term,
    elementary,
    evaluate_hom,
    format_term,
    generators,
    parse_term,
    rename,
    to_dnf,
)
from conftest import terms
from oracles import naive_eval


def test_parse_examples():
    assert parse_term("x0 & !x1") == And((Var(0), Not(Var(1))))
    assert parse_term("0") == Const(0)
    assert parse_term("x0 | (x1 & x2)") == Or((Var(0), And((Var(1), Var(2)))))


def test_parse_precedence_and_whitespace():
    assert parse_term("  x0|x1&x2 ") == parse_term("x0 | (x1 & x2)")
    assert parse_term("!!x3") == Not(Not(Var(3)))
    assert parse_term("x0 & x1 & x2") == And((Var(0), Var(1), Var(2)))


@pytest.mark.parametrize("text,pos", [("x0 &", 4), ("(x0", 3), ("x0 x1", 3), ("y0", 0), ("", 0), ("x", 1)])
def test_syntax_error_positions(text, pos):
    with pytest.raises(TermSyntaxError) as e:
        parse_term(text)
    assert e.value.pos == pos


def test_out_of_range_is_deferred_to_evaluation():
    t = parse_term("x7")
    assert generators(t) == {7}
    with pytest.raises(GeneratorRangeError):
        check_range(t, 3)


def test_evaluate_examples():
    f = row_from_bits("101")
    assert evaluate_hom(f, parse_term("x0 & !x1")) == 1
    assert evaluate_hom(f, parse_term("0")) == 0
    assert evaluate_hom(f, parse_term("x2 | x1")) == 1


def test_constants_and_empty_connectives():
    assert conj([]) == ONE and disj([]) == ZERO
    assert conj([Var(2)]) == Var(2)
    assert to_dnf(ZERO) == [] and to_dnf(ONE) == [{}]


def test_elementary_rejects_repeats():
    with pytest.raises(ValueError):
        elementary([(0, 0), (0, 1)])
    assert elementary([(1, 1), (0, 0)]) == And((Not(Var(1)), Var(0)))


@given(terms(4))
def test_print_parse_round_trip(t):
    assert parse_term(format_term(t)) == t


@given(terms(4))
def test_evaluation_matches_naive_rewrite(t):
    for bits in product("01", repeat=4):
        s = "".join(bits)
        assert evaluate_hom(row_from_bits(s), t) == naive_eval(s, t)


@given(terms(5, max_leaves=10))
def test_dnf_preserves_semantics_exhaustively(t):
    d = dnf_term(t)
    for row in range(1 << 5):
        assert evaluate_hom(row, d) == evaluate_hom(row, t)
    for conjunct in to_dnf(t):
        assert len(conjunct) == len(set(conjunct))


@given(terms(3), st.permutations([0, 1, 2]))
def test_rename_moves_generators(t, perm):
    mapping = dict(enumerate(perm))
    r = rename(t, mapping)
    assert generators(r) == {mapping[g] for g in generators(t)}
    for row in range(8):
        moved = sum(((row >> g) & 1) << mapping[g] for g in range(3))
        assert evaluate_hom(moved, r) == evaluate_hom(row, t)
