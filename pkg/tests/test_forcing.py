import random

import pytest

from balab.algebra import leq_holds, subalgebra_check
from balab.forcing import (
    ChainError,
    Condition,
    PreconditionError,
    SParams,
    TripleInstance,
    chain_union_algebra,
    condition_algebra,
    condition_iso,
    cut_levels,
    enumerate_conditions,
    leq,
    p_leq,
    p_pair_amalgamate,
    q_leq,
    q_pair_amalgamate,
    shift_above,
    shift_below,
    triple_amalgamate,
    validate_condition,
)
from balab.forcing.amalgam import tau_term
from balab.forcing.instances import random_instance
from balab.io import parse_algebra, parse_condition
from balab.separation import Kind, is_separated
from balab.terms import Var
from conftest import DATA, GOLDEN

P1 = SParams(1, (1,))
P11 = SParams(2, (1, 1))
P12 = SParams(2, (1, 2), ucap=3)


def single(flavor, level=0):
    return Condition.make(flavor, {level}, {(level, 0): {(level, 0)}})


def load(name):
    cf = parse_condition((DATA / name).read_text())
    return cf.params, cf.condition


# ---------------------------------------------------------------------------
# validity and truncations


@pytest.mark.parametrize("flavor", ["q", "p"])
def test_single_point_validity(flavor):
    assert validate_condition(P1, single(flavor))
    bad = Condition.make(flavor, {0}, {(0, 0): set()})
    v = validate_condition(P1, bad)
    assert not v and v.clause == "c"


def test_zero_below_for_q():
    params = SParams(1, (2,))
    c = Condition.make("q", {0}, {(0, 0): {(0, 0)}, (0, 1): {(0, 0), (0, 1)}})
    assert not validate_condition(params, c)
    assert validate_condition(params, Condition.make("p", {0}, c.fmap()))


def test_validity_clauses():
    params = SParams(2, (1, 2))
    missing_base = Condition.make("q", {0, 1}, {(0, 0): {(0, 0)}})
    assert validate_condition(params, missing_base).clause == "b"
    stray_level = Condition.make("q", {0}, {(0, 0): {(0, 0)}, (1, 0): {(1, 0)}})
    assert validate_condition(params, stray_level).clause == "b"
    outside = Condition.make("q", {0}, {(0, 0): {(0, 0)}, (0, 3): {(0, 3)}})
    assert validate_condition(params, outside).clause == "a"
    assert validate_condition(params.with_cap(0 + 1), Condition.make("q", {1}, {(1, 0): {(1, 0)}, (1, 1): {(1, 1)}})).clause == "a"


def test_truncations():
    g = frozenset({(0, 0), (0, 1), (1, 0)})
    assert shift_below(g, 0, 0) == g
    assert shift_below(g, 0, 2) == {(1, 0)}
    assert shift_above(g, 0, 0) == {(1, 0)}
    assert shift_above(g, 0, 1) == {(0, 0), (1, 0)}
    assert cut_levels(g, 0) == frozenset()
    assert cut_levels(g, 1) == {(0, 0), (0, 1)}


# ---------------------------------------------------------------------------
# the order


@pytest.mark.parametrize("flavor", ["q", "p"])
def test_reflexive_on_files(flavor):
    for name in (f"{flavor}1.txt", f"{flavor}2.txt"):
        params, c = load(name)
        assert leq(params, c, c)


def test_file_pairs_are_ordered():
    params, q1 = load("q1.txt")
    _, q2 = load("q2.txt")
    res = q_leq(params, q1, q2)
    assert res and len(res.certificate) == len(q2.u)
    assert not q_leq(params, q2, q1)
    params, p1 = load("p1.txt")
    _, p2 = load("p2.txt")
    assert p_leq(params, p1, p2)
    with pytest.raises(ValueError):
        q_leq(params, p1, p2)


@pytest.mark.parametrize("flavor", ["q", "p"])
def test_extension_by_zero_restrictions(flavor):
    p = single(flavor)
    q = Condition.make(flavor, {0, 1}, {(0, 0): {(0, 0)}, (1, 0): {(1, 0)}})
    res = leq(P11, p, q)
    assert res and res.certificate[-1].case == "zero"


def test_changed_value_fails_beta():
    params = SParams(1, (2,))
    p = Condition.make("p", {0}, {(0, 0): {(0, 0)}, (0, 1): {(0, 1)}})
    q = Condition.make("p", {0}, {(0, 0): {(0, 0)}, (0, 1): {(0, 0), (0, 1)}})
    res = leq(params, p, q)
    assert not res and res.clause == "beta"


# ---------------------------------------------------------------------------
# isomorphism


def test_iso_examples():
    p = single("q", 0)
    assert condition_iso(p, p).H == {(0, 0): (0, 0)}
    got = condition_iso(p, single("q", 1))
    assert got and got.H == {(0, 0): (1, 0)}
    params = SParams(2, (2, 2))
    a = Condition.make("q", {0}, {(0, 0): {(0, 0), (0, 1)}, (0, 1): {(0, 1)}})
    b = Condition.make("q", {1}, {(1, 0): {(1, 0)}, (1, 1): {(1, 1)}})
    assert validate_condition(params, a) and validate_condition(params, b)
    bad = condition_iso(a, b)
    assert not bad and bad.clause == "beta"


# ---------------------------------------------------------------------------
# pair amalgams


@pytest.mark.parametrize("flavor", ["q", "p"])
def test_identity_pair_collapses(flavor):
    params, c = load(f"{flavor}2.txt")
    amalg = q_pair_amalgamate if flavor == "q" else p_pair_amalgamate
    assert amalg(params, c, c) == c


def test_disjoint_levels_q_amalgam_golden():
    p, q = single("q", 0), single("q", 1)
    r = q_pair_amalgamate(P11, p, q)
    assert r.u == ((0, 0), (1, 0))
    assert r.fn((0, 0)) == {(0, 0), (1, 0)} and r.fn((1, 0)) == {(1, 0)}
    assert q_leq(P11, p, r) and q_leq(P11, q, r)
    golden = parse_algebra((GOLDEN / "amalgam_disjoint_algebra.txt").read_text())
    assert condition_algebra(P11, r).bitstrings() == golden.bitstrings()


def test_disjoint_levels_p_amalgam():
    p, q = single("p", 0), single("p", 1)
    r = p_pair_amalgamate(P11, p, q)
    assert r.u == ((0, 0), (1, 0))
    assert p_leq(P11, p, r) and p_leq(P11, q, r)


def test_q_amalgam_level_order_violation():
    # levels only in p must lie below levels only in q
    with pytest.raises(PreconditionError) as e:
        q_pair_amalgamate(P11, single("q", 1), single("q", 0))
    assert e.value.clause == "iii"


def test_p_amalgam_bad_map():
    p, q = single("p", 0), single("p", 1)
    with pytest.raises(PreconditionError) as e:
        p_pair_amalgamate(P11, p, q, {(0, 0): (0, 0)})
    assert e.value.clause == "iso"


def test_pair_amalgams_exhaustive_small():
    for flavor, amalg in (("q", q_pair_amalgamate), ("p", p_pair_amalgamate)):
        conds = enumerate_conditions(P12, flavor)
        done = 0
        for p in conds:
            for q in conds:
                if not condition_iso(p, q):
                    continue
                try:
                    r = amalg(P12.with_cap(2 * P12.ucap), p, q)
                except PreconditionError:
                    continue
                big = P12.with_cap(max(1, len(r.u)))
                assert leq(big, p, r) and leq(big, q, r)
                done += 1
        assert done > 0


# ---------------------------------------------------------------------------
# algebras


@pytest.mark.parametrize("flavor", ["q", "p"])
def test_single_point_algebra(flavor):
    assert condition_algebra(P1, single(flavor)).bitstrings() == ["0", "1"]


@pytest.mark.parametrize("flavor", ["q", "p"])
def test_empty_condition_algebra_has_zero_row(flavor):
    empty = Condition(flavor, frozenset(), (), ())
    assert condition_algebra(P1, empty).rows == {0}


@pytest.mark.parametrize("flavor", ["q", "p"])
def test_monotone_on_file_pair(flavor):
    params, a = load(f"{flavor}1.txt")
    _, b = load(f"{flavor}2.txt")
    assert subalgebra_check(condition_algebra(params, a), condition_algebra(params, b))


@pytest.mark.parametrize("flavor", ["q", "p"])
def test_generators_are_separated(flavor):
    kind = Kind.RIGHT_SEPARATED if flavor == "q" else Kind.LEFT_SEPARATED
    for c in enumerate_conditions(P12, flavor):
        alg = condition_algebra(P12, c)
        assert is_separated(alg, [Var(k) for k in range(len(c.u))], kind)


@pytest.mark.parametrize("flavor", ["q", "p"])
def test_poset_axioms_small(flavor):
    params = SParams(2, (1, 2), ucap=2)
    conds = enumerate_conditions(params, flavor)
    rel = {(a, b) for a, b in ((x, y) for x in range(len(conds)) for y in range(len(conds))) if leq(params, conds[a], conds[b])}
    assert all((k, k) in rel for k in range(len(conds)))
    for a, b in rel:
        for c in range(len(conds)):
            if (b, c) in rel:
                assert (a, c) in rel


# ---------------------------------------------------------------------------
# chains


def test_chain_examples():
    params, q1 = load("q1.txt")
    _, q2 = load("q2.txt")
    assert chain_union_algebra(params, [q1]) == condition_algebra(params, q1)
    assert chain_union_algebra(params, [q1, q2]) == condition_algebra(params, q2)
    with pytest.raises(ChainError) as e:
        chain_union_algebra(params, [q1, q2, q1])
    assert e.value.index == 1
    r = q_pair_amalgamate(P11, single("q", 0), single("q", 1))
    chain_union_algebra(P11, [single("q", 0), r])
    chain_union_algebra(P11, [single("q", 1), r])


# ---------------------------------------------------------------------------
# triples


@pytest.mark.parametrize("flavor", ["q", "p"])
def test_collapsed_triple(flavor):
    c = single(flavor)
    taus = ([((0, 0), 0)],) * 3
    res = triple_amalgamate(TripleInstance(flavor, P1, c, c, c, c, taus, 0))
    assert res.ok and res.r == c


@pytest.mark.parametrize("flavor", ["q", "p"])
def test_generated_triples(flavor):
    rng = random.Random(17)
    for _ in range(40):
        inst = random_instance(rng, flavor)
        res = triple_amalgamate(inst)
        assert res.ok
        alg = condition_algebra(inst.params.with_cap(len(res.r.u)), res.r)
        t0, t1, t2 = (tau_term(res.r, t) for t in inst.taus)
        if flavor == "q":
            assert leq_holds(alg, t0, [t1, t2])


@pytest.mark.parametrize("flavor", ["q", "p"])
def test_triple_heart_violation(flavor):
    # q extends q0 by the only point of q1, which is not in the (empty) heart
    q0, q1 = single(flavor, 0), single(flavor, 1)
    q = Condition.make(flavor, {0, 1}, {(0, 0): {(0, 0)}, (1, 0): {(1, 0)}})
    taus = ([((0, 0), 0)], [((1, 0), 0)], [((1, 0), 0)])
    inst = TripleInstance(flavor, P11, q, q0, q1, q1, taus, 0)
    with pytest.raises(PreconditionError) as e:
        triple_amalgamate(inst)
    assert e.value.clause == "heart"
