import math
import random
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from balab.combinatorics import (
    delta_system_extract,
    delta_system_sequences,
    free_set_search,
    is_free,
    verify_delta,
)
from oracles import naive_delta, naive_free


def test_delta_examples():
    got = delta_system_extract([{1, 2}, {1, 3}, {1, 4}], 3)
    assert got.indices == [0, 1, 2] and got.heart == {1} and got.exact
    got = delta_system_extract([{1, 2}, {3, 4}, {5, 6}], 3)
    assert got.heart == frozenset()
    assert delta_system_extract([{1, 2}, {1, 3}, {2, 3}, {1, 2, 3}], 4) is None
    with pytest.raises(ValueError):
        delta_system_extract([{1}], 1)


def test_nine_pairs_from_six_points_always_have_three_petals():
    pairs = [frozenset(c) for c in combinations(range(1, 7), 2)]
    for fam in combinations(pairs, 9):
        got = delta_system_extract(list(fam), 3)
        assert got is not None and verify_delta(list(fam), got.indices, got.heart)


@given(st.lists(st.frozensets(st.integers(0, 6), max_size=4), min_size=2, max_size=9), st.integers(2, 4))
def test_extractor_agrees_with_enumeration(fam, target):
    got = delta_system_extract(fam, target)
    ref = naive_delta(fam, target)
    assert (got is None) == (ref is None)
    if got:
        assert len(got.indices) == target and verify_delta(fam, got.indices, got.heart)


def test_greedy_path_is_flagged():
    rng = random.Random(2)
    fam = [frozenset(rng.sample(range(12), 3)) for _ in range(30)]
    got = delta_system_extract(fam, 3)
    assert got is not None and not got.exact
    assert verify_delta(fam, got.indices, got.heart)
    assert delta_system_extract(fam, 3, exact=True).exact


def test_sunflower_bound_sample():
    rng = random.Random(8)
    for _ in range(50):
        k, lam = rng.randint(1, 3), rng.randint(2, 4)
        bound = math.factorial(k) * (lam - 1) ** k
        pool = [frozenset(c) for c in combinations(range(k + 9), k)]
        fam = rng.sample(pool, bound + 1)
        got = delta_system_extract(fam, lam, exact=True)
        assert got is not None and verify_delta(fam, got.indices, got.heart)


def test_sequence_examples():
    got = delta_system_sequences([(1, 2, 3)] * 3, 3)
    assert got.heart == {0: 1, 1: 2, 2: 3}
    got = delta_system_sequences([(1, 2), (1, 3), (1, 4)], 3)
    assert got.heart == {0: 1}
    with pytest.raises(ValueError):
        delta_system_sequences([(1,), (1, 2)], 2)


def test_sequences_against_pairwise_oracle():
    rng = random.Random(4)
    for _ in range(200):
        seqs = [tuple(rng.randrange(3) for _ in range(3)) for _ in range(6)]
        got = delta_system_sequences(seqs, 2)
        # any two sequences form a 2-element system
        assert got is not None
        a, b = got.indices
        agree = {p for p in range(3) if seqs[a][p] == seqs[b][p]}
        assert set(got.heart) == agree
        got3 = delta_system_sequences(seqs, 3)
        ref = naive_delta([frozenset(enumerate(s)) for s in seqs], 3)
        assert (got3 is None) == (ref is None)
        if got3:
            for x, y in combinations(got3.indices, 2):
                for p in range(3):
                    same = seqs[x][p] == seqs[y][p]
                    assert same == (p in got3.heart)


def test_free_set_examples():
    assert sorted(free_set_search({y: [] for y in range(5)}, 5)) == list(range(5))
    assert free_set_search({0: [1], 1: [2], 2: [0]}, 2) is None
    got = free_set_search({0: [1], 1: [], 2: [], 3: []}, 3)
    assert len(got) == 3 and is_free({0: {1}, 1: set(), 2: set(), 3: set()}, got)
    with pytest.raises(ValueError):
        free_set_search({0: []}, 2)
    with pytest.raises(ValueError):
        free_set_search({0: [7]}, 1)


def test_free_set_against_enumeration():
    rng = random.Random(6)
    for _ in range(300):
        n = rng.randint(1, 10)
        m = {y: [z for z in range(n) if rng.random() < 0.25] for y in range(n)}
        t = rng.randint(1, n)
        got = free_set_search(m, t)
        ref = naive_free(m, t)
        assert (got is None) == (ref is None)
        if got:
            assert len(got) == t and is_free({y: set(v) for y, v in m.items()}, got)
