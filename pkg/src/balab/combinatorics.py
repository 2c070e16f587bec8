"""Delta-systems (sunflowers) and free sets for finite families."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Hashable, Mapping, Sequence

EXACT_DELTA_LIMIT = 20
EXACT_FREE_LIMIT = 24


@dataclass
class DeltaSystem:
    indices: list
    heart: frozenset
    exact: bool


def verify_delta(fam: Sequence[frozenset], indices: Sequence[int], heart: frozenset) -> bool:
    return all(fam[a] & fam[b] == heart for a, b in combinations(indices, 2))


def _clique(adj: list[set[int]], cands: list[int], target: int) -> list[int] | None:
    # find `target` pairwise-adjacent vertices among cands
    def grow(chosen: list[int], rest: list[int]):
        if len(chosen) == target:
            return chosen
        if len(chosen) + len(rest) < target:
            return None
        for k, v in enumerate(rest):
            got = grow(chosen + [v], [x for x in rest[k + 1 :] if x in adj[v]])
            if got:
                return got
        return None

    return grow([], cands)


def _exact_delta(fam: list[frozenset], target: int):
    n = len(fam)
    # every candidate heart is the intersection of some pair in the system
    hearts = []
    for a, b in combinations(range(n), 2):
        h = fam[a] & fam[b]
        if h not in hearts:
            hearts.append(h)
    hearts.sort(key=lambda h: (len(h), sorted(map(repr, h))))
    for h in hearts:
        cands = [k for k in range(n) if h <= fam[k]]
        if len(cands) < target:
            continue
        adj = [set() for _ in range(n)]
        for a, b in combinations(cands, 2):
            if fam[a] & fam[b] == h:
                adj[a].add(b)
                adj[b].add(a)
        got = _clique(adj, cands, target)
        if got:
            return got, h
    return None


def _greedy_delta(fam: list[frozenset], target: int):
    # group by (size, fingerprint); inside a group take members greedily
    groups: dict = {}
    for k, s in enumerate(fam):
        groups.setdefault((len(s), min(map(repr, s), default="")), []).append(k)
    buckets = sorted(groups.values(), key=len, reverse=True) + [list(range(len(fam)))]
    for bucket in buckets:
        for a, b in combinations(bucket, 2):
            h = fam[a] & fam[b]
            chosen = [a, b]
            for c in bucket:
                if c not in chosen and all(fam[c] & fam[x] == h for x in chosen):
                    chosen.append(c)
                    if len(chosen) == target:
                        return chosen, h
            if len(chosen) >= target:
                return chosen[:target], h
    return None


def delta_system_extract(fam: Sequence, target: int, exact: bool | None = None) -> DeltaSystem | None:
    """``target`` members whose pairwise intersections all equal one heart.

    By default the search is exact up to ``EXACT_DELTA_LIMIT`` members and
    greedy (flagged non-exact) above; ``exact`` forces either mode.
    Returns None when nothing was found.
    """
    if target < 2:
        raise ValueError("target must be at least 2")
    fam = [frozenset(s) for s in fam]
    if len(fam) < target:
        return None
    if exact is None:
        exact = len(fam) <= EXACT_DELTA_LIMIT
    got = _exact_delta(fam, target) if exact else _greedy_delta(fam, target)
    if got is None:
        return None
    idx, heart = got
    idx = sorted(idx)
    assert verify_delta(fam, idx, heart)
    return DeltaSystem(idx, heart, exact)


@dataclass
class SequenceDelta:
    indices: list
    heart: dict  # position -> shared value
    exact: bool


def delta_system_sequences(seqs: Sequence[Sequence], target: int) -> SequenceDelta | None:
    """Delta-system of equal-length sequences viewed as sets of (position, value).

    Selected sequences agree on the heart positions and pairwise differ at every
    other position.
    """
    if seqs and len({len(s) for s in seqs}) != 1:
        raise ValueError("sequences must have equal length")
    labelled = [frozenset(enumerate(s)) for s in seqs]
    got = delta_system_extract(labelled, target)
    if got is None:
        return None
    return SequenceDelta(got.indices, dict(sorted(got.heart)), got.exact)


def is_free(m: Mapping[Hashable, frozenset], s) -> bool:
    return all(a not in m[b] for a in s for b in s if a != b)


def free_set_search(m: Mapping[Hashable, Sequence], target: int) -> list | None:
    """A set of ``target`` points none of which lies in the image of another.

    Exact branch and bound; refuses domains beyond ``EXACT_FREE_LIMIT``.
    """
    ys = sorted(m, key=repr)
    if target > len(ys):
        raise ValueError("target exceeds domain size")
    if len(ys) > EXACT_FREE_LIMIT:
        raise ValueError(f"domain of size {len(ys)} exceeds exact limit {EXACT_FREE_LIMIT}")
    img = {y: frozenset(m[y]) for y in ys}
    for y in ys:
        if not img[y] <= set(ys):
            raise ValueError(f"image of {y!r} leaves the domain")
    # conflict graph: y ~ y' when one is in the other's image
    pos = {y: k for k, y in enumerate(ys)}
    bad = [0] * len(ys)
    for y in ys:
        for z in img[y]:
            if z != y:
                bad[pos[y]] |= 1 << pos[z]
                bad[pos[z]] |= 1 << pos[y]

    def grow(chosen: list[int], allowed: int):
        if len(chosen) == target:
            return chosen
        if len(chosen) + bin(allowed).count("1") < target:
            return None
        while allowed:
            v = (allowed & -allowed).bit_length() - 1
            allowed &= ~(1 << v)
            got = grow(chosen + [v], allowed & ~bad[v])
            if got:
                return got
        return None

    got = grow([], (1 << len(ys)) - 1)
    return None if got is None else [ys[k] for k in got]
