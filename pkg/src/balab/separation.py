"""Ideal-independent, left-separated and right-separated sequences.

For a finite sequence the finite-subset quantifier collapses to a single join:
``a_k`` must not lie below the join of all others (ideal-independent), of all
later elements (left-separated) or of all earlier elements (right-separated).

Searches work with the *row set* of each term, ``S_a = {f in F : f(a) = 1}``:
``a <= join(Y)`` iff ``S_a`` is covered by the union of the ``S_y``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Sequence

from .algebra import PresentedAlgebra, find_separating_row, leq_holds, row_to_bits
from .terms import Term, check_range, elementary, evaluate_hom, format_term


class Kind(enum.Enum):
    IDEAL_INDEPENDENT = "ideal"
    LEFT_SEPARATED = "left"
    RIGHT_SEPARATED = "right"


def _others(seq: Sequence[Term], k: int, kind: Kind) -> list[Term]:
    if kind is Kind.IDEAL_INDEPENDENT:
        return [t for j, t in enumerate(seq) if j != k]
    if kind is Kind.LEFT_SEPARATED:
        return list(seq[k + 1 :])
    return list(seq[:k])


def is_separated(alg: PresentedAlgebra, seq: Sequence[Term], kind: Kind) -> bool:
    return all(not leq_holds(alg, t, _others(seq, k, kind)) for k, t in enumerate(seq))


@dataclass
class SequenceWitness:
    elements: list
    rows: list = field(default_factory=list)
    ok: bool = True
    failed_at: int | None = None

    def to_json(self, n: int) -> dict:
        return {
            "ok": self.ok,
            "failed_at": self.failed_at,
            "witness": [format_term(t) for t in self.elements],
            "witness_rows": [row_to_bits(r, n) for r in self.rows],
        }


def witness_homomorphisms(alg: PresentedAlgebra, seq: Sequence[Term], kind: Kind) -> SequenceWitness:
    """Per element a row sending it to 1 and the relevant other elements to 0."""
    rows = []
    for k, t in enumerate(seq):
        f = find_separating_row(alg, t, _others(seq, k, kind))
        if f is None:
            return SequenceWitness(list(seq), rows, ok=False, failed_at=k)
        rows.append(f)
    return SequenceWitness(list(seq), rows)


def ideal_membership(alg: PresentedAlgebra, a: Term, ys: Sequence[Term]) -> bool:
    """Whether ``a`` lies in the ideal generated by ``ys``."""
    return leq_holds(alg, a, ys)


def row_signature(alg: PresentedAlgebra, t: Term) -> int:
    """Bitmask over ``alg.sorted_rows()`` of the rows sending ``t`` to 1."""
    check_range(t, alg.n)
    return sum(1 << k for k, f in enumerate(alg.sorted_rows()) if evaluate_hom(f, t))


def elementary_candidates(alg: PresentedAlgebra, max_arity: int) -> list[Term]:
    """Nonzero elementary conjunctions of arity 1..max_arity, one per element of B.

    Two terms are equal in ``B(w, F)`` exactly when they have the same row set,
    so deduplication keeps the first term seen for each signature.
    """
    if max_arity > alg.n:
        raise ValueError(f"arity {max_arity} exceeds |w|={alg.n}")
    rows = alg.sorted_rows()
    seen: set[int] = set()
    out = []
    for k in range(1, max_arity + 1):
        for gens in combinations(range(alg.n), k):
            for negs in product((0, 1), repeat=k):
                sig = 0
                for r, f in enumerate(rows):
                    if all(((f >> g) & 1) != t for g, t in zip(gens, negs)):
                        sig |= 1 << r
                if sig and sig not in seen:
                    seen.add(sig)
                    out.append(elementary(zip(gens, negs)))
    return out


@dataclass
class SearchResult:
    kind: Kind
    length: int
    witness: SequenceWitness
    exact: bool
    nodes: int

    def to_json(self, n: int) -> dict:
        w = self.witness.to_json(n)
        return {
            "kind": self.kind.value,
            "length": self.length,
            "exact": self.exact,
            "nodes": self.nodes,
            "witness": w["witness"],
            "witness_rows": w["witness_rows"],
        }


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0
        self.exhausted = False

    def take(self) -> bool:
        if self.used >= self.limit:
            self.exhausted = True
            return False
        self.used += 1
        return True


def _search_ideal(sigs: list[int], full: int, budget: _Budget) -> list[int]:
    best: list[int] = []
    cap = min(len(sigs), bin(full).count("1"))

    def dfs(start: int, chosen: list[int], private: list[int], union: int):
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
        if len(best) >= cap:
            return
        # each further element needs its own row outside the current union
        if len(chosen) + min(bin(full & ~union).count("1"), len(sigs) - start) <= len(best):
            return
        for c in range(start, len(sigs)):
            s = sigs[c]
            if not s & ~union:
                continue
            if any(not p & ~s for p in private):
                continue
            if not budget.take():
                return
            new_private = [p & ~s for p in private] + [s & ~union]
            chosen.append(c)
            dfs(c + 1, chosen, new_private, union | s)
            chosen.pop()
            if len(best) >= cap or budget.exhausted:
                return

    dfs(0, [], [], 0)
    return best


def _search_right(sigs: list[int], full: int, budget: _Budget) -> list[int]:
    # longest chain of strictly growing unions; memoised on the union
    memo: dict[int, list[int]] = {}

    def best_from(union: int) -> list[int]:
        if union in memo:
            return memo[union]
        room = bin(full & ~union).count("1")
        best: list[int] = []
        for c, s in enumerate(sigs):
            if len(best) >= room or budget.exhausted:
                break
            if not s & ~union:
                continue
            if not budget.take():
                break
            tail = best_from(union | s)
            if 1 + len(tail) > len(best):
                best = [c] + tail
        memo[union] = best
        return best

    return best_from(0)


def max_separated_length(
    alg: PresentedAlgebra, kind: Kind, pool: Sequence[Term], budget: int = 1_000_000
) -> SearchResult:
    """Longest separated sequence of the given kind drawn from ``pool``.

    The result is flagged exact when the search finished within ``budget`` node
    expansions; otherwise it is the best sequence found (a lower bound).
    """
    if not pool:
        raise ValueError("empty candidate pool")
    full = (1 << len(alg.rows)) - 1
    sigs = [row_signature(alg, t) for t in pool]
    # small row sets first; stable, so ties keep pool order
    order = sorted(range(len(pool)), key=lambda k: bin(sigs[k]).count("1"))
    ordered = [sigs[k] for k in order]
    b = _Budget(budget)
    if kind is Kind.IDEAL_INDEPENDENT:
        picked = _search_ideal(ordered, full, b)
    else:
        picked = _search_right(ordered, full, b)
        if kind is Kind.LEFT_SEPARATED:
            # a left-separated sequence is a right-separated one read backwards
            picked = picked[::-1]
    seq = [pool[order[c]] for c in picked]
    wit = witness_homomorphisms(alg, seq, kind)
    assert wit.ok, "search returned a non-separated sequence"
    return SearchResult(kind, len(seq), wit, not b.exhausted, b.used)


@dataclass
class InvariantReport:
    spread: SearchResult | None
    left: SearchResult | None
    right: SearchResult | None
    atoms: int
    pool_size: int

    @property
    def exact(self) -> bool:
        return all(r is None or r.exact for r in (self.spread, self.left, self.right))

    def lengths(self) -> tuple[int, int, int]:
        return tuple(0 if r is None else r.length for r in (self.spread, self.left, self.right))

    def to_json(self, n: int) -> dict:
        def one(r):
            return None if r is None else r.to_json(n)

        return {
            "atoms": self.atoms,
            "pool_size": self.pool_size,
            "exact": self.exact,
            "spread": one(self.spread),
            "left": one(self.left),
            "right": one(self.right),
        }


def invariant_report(alg: PresentedAlgebra, max_arity: int | None = None, budget: int = 1_000_000) -> InvariantReport:
    """Spread and the left/right separation lengths over elementary candidates."""
    pool = elementary_candidates(alg, alg.n if max_arity is None else max_arity)
    if not pool:
        return InvariantReport(None, None, None, len(alg.rows), 0)
    res = [max_separated_length(alg, k, pool, budget) for k in Kind]
    return InvariantReport(res[0], res[1], res[2], len(alg.rows), len(pool))
