import random
from itertools import product

import pytest
from hypothesis import given

from balab.algebra import (
    OracleSizeError,
    PresentedAlgebra,
    atoms,
    closure,
    equal_holds,
    is_nonzero,
    leq_holds,
    oracle_leq,
    row_from_bits,
    row_to_bits,
    subalgebra_check,
)
from balab.terms import ZERO, elementary, format_term, parse_term
from conftest import algebra_and_terms, random_algebra, random_term
from oracles import naive_leq

A = PresentedAlgebra.from_bits
T = parse_term


def test_bit_conventions():
    assert row_from_bits("101") == 0b101
    assert row_from_bits("110") == 0b011
    assert row_to_bits(0b011, 3) == "110"
    with pytest.raises(ValueError):
        row_from_bits("12")


def test_rows_are_deduplicated_with_a_count():
    alg = A(["00", "00", "11"])
    assert alg.bitstrings() == ["00", "11"]
    assert alg.dropped_duplicates == 1


def test_closure_examples():
    assert closure(2, []) == frozenset()
    assert closure(2, range(4)) == frozenset(range(4))
    assert closure(2, [row_from_bits("00"), row_from_bits("11")]) == {0b00, 0b11}


def test_closure_idempotent():
    rng = random.Random(1)
    for _ in range(50):
        rows = {rng.randrange(16) for _ in range(rng.randint(0, 8))}
        once = closure(4, rows)
        assert closure(4, once) == once == rows


def test_is_nonzero_examples():
    assert not is_nonzero(A(["000"]), T("x0"))
    assert not is_nonzero(A(["10", "01"]), T("x0 & x1"))
    assert is_nonzero(A(["10", "01"]), T("x0 & !x1"))


def test_leq_examples():
    alg = A(["10", "01", "11"])
    assert leq_holds(alg, T("x0"), [T("x0|x1")])
    assert leq_holds(alg, T("x0&x1"), [T("x0")])
    assert not leq_holds(A(["11", "10"]), T("x0"), [T("x1")])


def test_equal_examples():
    assert equal_holds(A(["10"]), T("x0 & x0"), T("x0 & x0"))
    assert equal_holds(A(["10", "01"]), T("x0"), T("!x1"))
    assert not equal_holds(PresentedAlgebra.free(2), T("x0"), T("x1"))


def test_atoms_examples():
    assert len(atoms(PresentedAlgebra.free(2))) == 4
    assert len(atoms(A(["00", "00", "11"]))) == 2
    assert [format_term(t) for t in atoms(A(["10", "11"]))] == ["x0 & !x1", "x0 & x1"]


def test_oracle_examples():
    alg = A(["10", "01", "11"])
    assert oracle_leq(alg, T("x0"), [T("x0|x1")])
    assert oracle_leq(alg, T("x0&x1"), [T("x0")])
    assert not oracle_leq(A(["11", "10"]), T("x0"), [T("x1")])
    assert oracle_leq(PresentedAlgebra(2, frozenset()), T("x0"), [T("x1")])
    assert not oracle_leq(A(["1"]), T("x0"), [])


def test_oracle_size_bound():
    with pytest.raises(OracleSizeError):
        oracle_leq(PresentedAlgebra(20, frozenset()), T("x0"), [], max_generators=16)


def test_empty_family_is_degenerate():
    alg = PresentedAlgebra(3, frozenset())
    assert not is_nonzero(alg, T("1"))
    assert leq_holds(alg, T("1"), [])


def test_subalgebra_examples():
    a = A(["10", "11"])
    assert subalgebra_check(a, a)
    small = PresentedAlgebra.from_bits(["0"], labels=["a"])
    big = PresentedAlgebra.from_bits(["01", "00"], labels=["a", "b"])
    assert subalgebra_check(small, big)
    small = PresentedAlgebra.from_bits(["1"], labels=["a"])
    big = PresentedAlgebra.from_bits(["01"], labels=["a", "b"])
    assert not subalgebra_check(small, big)
    with pytest.raises(ValueError):
        subalgebra_check(PresentedAlgebra.from_bits(["1"], labels=["z"]), big)


@given(algebra_and_terms(k=3, max_n=5, max_rows=12))
def test_leq_agrees_with_oracles(data):
    alg, (a, b, c) = data
    got = leq_holds(alg, a, [b, c])
    assert got == oracle_leq(alg, a, [b, c])
    assert got == naive_leq(alg.bitstrings(), a, [b, c])


@given(algebra_and_terms(k=3))
def test_leq_is_a_preorder(data):
    alg, (a, b, c) = data
    assert leq_holds(alg, a, [a])
    if leq_holds(alg, a, [b]) and leq_holds(alg, b, [c]):
        assert leq_holds(alg, a, [c])
    if equal_holds(alg, a, b):
        assert equal_holds(alg, b, a)
        assert equal_holds(alg, a, c) == equal_holds(alg, b, c)


@given(algebra_and_terms(k=1))
def test_nonzero_iff_not_equal_to_zero(data):
    alg, (a,) = data
    assert is_nonzero(alg, a) == (not equal_holds(alg, a, ZERO))


def test_subalgebra_preserves_nonzeroness():
    # exhaustive over elementary conjunctions of the small algebra, for random pairs at |w| <= 4
    rng = random.Random(7)
    checked = 0
    while checked < 60:
        big = random_algebra(rng, 4, 8)
        if big.n < 2:
            continue
        k = rng.randint(1, big.n - 1)
        keep = sorted(rng.sample(range(big.n), k))
        rows = {sum(((g >> m) & 1) << i for i, m in enumerate(keep)) for g in big.rows}
        if rng.random() < 0.3 and rows:
            rows.discard(next(iter(rows)))
        small = PresentedAlgebra(k, frozenset(rows), labels=tuple(keep))
        big = PresentedAlgebra(big.n, big.rows)
        if not subalgebra_check(small, big):
            continue
        checked += 1
        for gens_signs in product(range(3), repeat=k):
            lits = [(g, s - 1) for g, s in zip(range(k), gens_signs) if s]
            t_small = elementary(lits)
            t_big = elementary([(keep[g], s) for g, s in lits])
            assert is_nonzero(small, t_small) == is_nonzero(big, t_big)


def test_random_agreement_smoke():
    rng = random.Random(0)
    for _ in range(300):
        alg = random_algebra(rng, 6, 16)
        lhs = random_term(rng, alg.n)
        rhs = [random_term(rng, alg.n) for _ in range(rng.randint(0, 3))]
        assert leq_holds(alg, lhs, rhs) == oracle_leq(alg, lhs, rhs)
