"""Boolean algebras presented by a finite family of 0/1 rows.

An algebra ``B(w, F)`` has generators ``x_0 .. x_{n-1}`` and is determined by the
set ``F`` of 2-valued homomorphisms it admits: a term is nonzero iff some row in
``F`` sends it to 1. Rows are ints (bit ``i`` = value of ``x_i``); as bitstrings,
character ``i`` is the value of ``x_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .terms import And, Const, Not, Or, Term, Var, check_range, elementary, evaluate_hom

ORACLE_MAX_GENERATORS = 16


def row_from_bits(bits: str) -> int:
    if any(c not in "01" for c in bits):
        raise ValueError(f"bad bitstring {bits!r}")
    return sum(1 << i for i, c in enumerate(bits) if c == "1")


def row_to_bits(row: int, n: int) -> str:
    return "".join("1" if (row >> i) & 1 else "0" for i in range(n))


@dataclass(frozen=True)
class PresentedAlgebra:
    """``B(w, F)`` with ``|w| = n``. ``labels`` names the generators (defaults to 0..n-1)."""

    n: int
    rows: frozenset
    labels: tuple = field(default=())
    dropped_duplicates: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("negative generator count")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(self.n)))
        if len(self.labels) != self.n or len(set(self.labels)) != self.n:
            raise ValueError("labels must be n distinct values")
        rows = frozenset(self.rows)
        for r in rows:
            if r < 0 or r >> self.n:
                raise ValueError(f"row {r} has bits outside {self.n} generators")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, n: int, rows: Iterable[int], labels: Sequence = ()) -> "PresentedAlgebra":
        rows = list(rows)
        return cls(n, frozenset(rows), tuple(labels), len(rows) - len(set(rows)))

    @classmethod
    def from_bits(cls, bitstrings: Iterable[str], n: int | None = None, labels: Sequence = ()) -> "PresentedAlgebra":
        bitstrings = list(bitstrings)
        if n is None:
            if not bitstrings:
                raise ValueError("cannot infer |w| from an empty row list")
            n = len(bitstrings[0])
        for b in bitstrings:
            if len(b) != n:
                raise ValueError(f"row {b!r} does not have length {n}")
        return cls.from_rows(n, [row_from_bits(b) for b in bitstrings], labels)

    @classmethod
    def free(cls, n: int) -> "PresentedAlgebra":
        return cls(n, frozenset(range(1 << n)))

    def sorted_rows(self) -> list[int]:
        # deterministic order: by bitstring
        return sorted(self.rows, key=lambda r: row_to_bits(r, self.n))

    def bitstrings(self) -> list[str]:
        return [row_to_bits(r, self.n) for r in self.sorted_rows()]

    def index_of(self, label) -> int:
        return self.labels.index(label)


# ---------------------------------------------------------------------------
# decision procedures (per-row evaluation)


def closure(n: int, rows: Iterable[int]) -> frozenset:
    """Rows of ``2^w`` all of whose finite restrictions occur in ``rows``.

    ``w`` is finite, so the restriction to ``u = w`` already decides membership
    and the closure is ``rows`` itself (restricted to valid patterns).
    """
    return frozenset(g for g in rows if 0 <= g < 1 << n)


def is_nonzero(alg: PresentedAlgebra, t: Term) -> bool:
    check_range(t, alg.n)
    return any(evaluate_hom(f, t) for f in alg.rows)


def find_separating_row(alg: PresentedAlgebra, lhs: Term, rhs: Sequence[Term]):
    """A row with ``f(lhs)=1`` and ``f(t)=0`` for every ``t`` in ``rhs``, or None."""
    check_range(lhs, alg.n)
    for t in rhs:
        check_range(t, alg.n)
    for f in alg.sorted_rows():
        if evaluate_hom(f, lhs) and not any(evaluate_hom(f, t) for t in rhs):
            return f
    return None


def leq_holds(alg: PresentedAlgebra, lhs: Term, rhs: Sequence[Term]) -> bool:
    """``alg |= lhs <= join(rhs)``."""
    return find_separating_row(alg, lhs, rhs) is None


def equal_holds(alg: PresentedAlgebra, a: Term, b: Term) -> bool:
    return leq_holds(alg, a, [b]) and leq_holds(alg, b, [a])


def atoms(alg: PresentedAlgebra) -> list[Term]:
    """One elementary conjunction per atom: each row's full generator pattern."""
    return [elementary((i, 1 - ((f >> i) & 1)) for i in range(alg.n)) for f in alg.sorted_rows()]


def subalgebra_check(small: PresentedAlgebra, big: PresentedAlgebra, mapping: Sequence[int] | None = None) -> bool:
    """Whether ``B(w, F)`` sits inside ``B(w*, F*)`` as a subalgebra.

    ``mapping[i]`` is the generator of ``big`` that corresponds to generator ``i`` of
    ``small``; by default generators are matched by label.
    """
    if mapping is None:
        try:
            mapping = [big.index_of(lab) for lab in small.labels]
        except ValueError:
            raise ValueError("generator set of the small algebra is not a subset of the big one") from None
    if len(set(mapping)) != len(mapping) or any(not 0 <= m < big.n for m in mapping):
        raise ValueError("mapping is not an injection into the big generator set")

    def restrict(g: int) -> int:
        return sum(((g >> m) & 1) << i for i, m in enumerate(mapping))

    restrictions = {restrict(g) for g in big.rows}
    cl = closure(small.n, small.rows)
    return small.rows <= restrictions and restrictions <= cl


# ---------------------------------------------------------------------------
# independent oracle: concrete set model over the row set


class OracleSizeError(ValueError):
    pass


def _denote(t: Term, cols: list[int], full: int) -> int:
    # subsets of F as bitmasks over row positions
    if isinstance(t, Const):
        return full if t.value else 0
    if isinstance(t, Var):
        return cols[t.index]
    if isinstance(t, Not):
        return full & ~_denote(t.arg, cols, full)
    if isinstance(t, And):
        acc = full
        for a in t.args:
            acc &= _denote(a, cols, full)
        return acc
    if isinstance(t, Or):
        acc = 0
        for a in t.args:
            acc |= _denote(a, cols, full)
        return acc
    raise TypeError(t)


def oracle_leq(alg: PresentedAlgebra, lhs: Term, rhs: Sequence[Term], max_generators: int = ORACLE_MAX_GENERATORS) -> bool:
    if alg.n > max_generators:
        raise OracleSizeError(f"|w|={alg.n} exceeds oracle bound {max_generators}")
    check_range(lhs, alg.n)
    for t in rhs:
        check_range(t, alg.n)
    rows = sorted(alg.rows)
    full = (1 << len(rows)) - 1
    cols = [sum(1 << k for k, f in enumerate(rows) if (f >> i) & 1) for i in range(alg.n)]
    left = _denote(lhs, cols, full)
    right = 0
    for t in rhs:
        right |= _denote(t, cols, full)
    return left & ~right == 0

