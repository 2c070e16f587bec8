"""Finite conditions on the grid of points ``(level, column)``.

A condition carries a set ``w`` of levels, a set ``u`` of grid points and, for
every ``s`` in ``u``, a 0/1 function on ``u``. Functions are stored as their
supports (the points mapped to 1). Points are compared lexicographically, so
plain tuple comparison gives the grid order.

Two flavours share the shape and differ in the zero constraint and the order:

* ``"q"``: ``f_s`` vanishes on points *below* ``s``; old functions may be
  truncated from below on one level (``shift_below``).
* ``"p"``: ``f_s`` vanishes on points *above* ``s``; old functions may be
  truncated from above on one level (``shift_above``) or cut at a level
  (``cut_levels``).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import combinations, product
from typing import Iterable, Sequence

from ..algebra import PresentedAlgebra, subalgebra_check

Point = tuple  # (level, column)
FLAVORS = ("q", "p")


@dataclass(frozen=True)
class SParams:
    """``J`` levels, widths ``chi[i]`` and a cap on ``|u|``."""

    J: int
    chi: tuple
    ucap: int = 8

    def __post_init__(self):
        object.__setattr__(self, "chi", tuple(self.chi))
        if self.J < 1 or len(self.chi) != self.J:
            raise ValueError("need J >= 1 and one width per level")
        if any(c < 1 for c in self.chi):
            raise ValueError("widths must be positive")
        if self.ucap < 1:
            raise ValueError("ucap must be positive")

    def points(self) -> list[Point]:
        return [(i, x) for i in range(self.J) for x in range(self.chi[i])]

    def with_cap(self, ucap: int) -> "SParams":
        return replace(self, ucap=ucap)


@dataclass(frozen=True)
class Condition:
    flavor: str
    w: frozenset
    u: tuple
    f: tuple  # f[k] is the support of the function attached to u[k]

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {self.flavor!r}")
        object.__setattr__(self, "w", frozenset(self.w))
        object.__setattr__(self, "u", tuple(tuple(s) for s in self.u))
        object.__setattr__(self, "f", tuple(frozenset(map(tuple, g)) for g in self.f))
        if len(self.u) != len(self.f):
            raise ValueError("one function per point required")

    @classmethod
    def make(cls, flavor: str, w: Iterable[int], fmap: dict) -> "Condition":
        u = tuple(sorted(fmap))
        return cls(flavor, frozenset(w), u, tuple(frozenset(fmap[s]) for s in u))

    @property
    def uset(self) -> frozenset:
        return frozenset(self.u)

    def fn(self, s: Point) -> frozenset:
        return self.f[self.u.index(s)]

    def fmap(self) -> dict:
        return dict(zip(self.u, self.f))

    def levels_of_u(self) -> set:
        return {i for i, _ in self.u}


# ---------------------------------------------------------------------------
# truncations


def shift_below(g: frozenset, level: int, eps: int) -> frozenset:
    """Zero on ``(level, c)`` for ``c < eps``."""
    return frozenset(p for p in g if not (p[0] == level and p[1] < eps))


def shift_above(g: frozenset, level: int, eps: int) -> frozenset:
    """Zero on ``(level, c)`` for ``eps <= c``."""
    return frozenset(p for p in g if not (p[0] == level and p[1] >= eps))


def cut_levels(g: frozenset, jp: int) -> frozenset:
    """Zero on every level ``>= jp``."""
    return frozenset(p for p in g if p[0] < jp)


def restrict(g: frozenset, dom) -> frozenset:
    return g & frozenset(dom)


# ---------------------------------------------------------------------------
# validity


@dataclass
class Verdict:
    ok: bool
    clause: str = ""
    detail: str = ""

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "clause": self.clause, "detail": self.detail}


def validate_condition(params: SParams, c: Condition, flavor: str | None = None) -> Verdict:
    flavor = flavor or c.flavor
    if flavor != c.flavor:
        return Verdict(False, "flavor", f"condition is {c.flavor}, expected {flavor}")
    if list(c.u) != sorted(set(c.u)):
        return Verdict(False, "a", "u must be strictly increasing")
    if len(c.u) > params.ucap:
        return Verdict(False, "a", f"|u|={len(c.u)} exceeds cap {params.ucap}")
    for i, x in c.u:
        if not (0 <= i < params.J and 0 <= x < params.chi[i]):
            return Verdict(False, "a", f"point ({i},{x}) outside the grid")
    for i in c.w:
        if not 0 <= i < params.J:
            return Verdict(False, "a", f"level {i} outside the grid")
        if (i, 0) not in c.uset:
            return Verdict(False, "b", f"level {i} in w but ({i},0) not in u")
    for i, x in c.u:
        if i not in c.w:
            return Verdict(False, "b", f"point ({i},{x}) at a level outside w")
    uset = c.uset
    for s, g in zip(c.u, c.f):
        if not g <= uset:
            return Verdict(False, "c", f"f{s} has support outside u")
        if s not in g:
            return Verdict(False, "c", f"f{s}{s} must be 1")
        for t in g:
            if (flavor == "q" and t < s) or (flavor == "p" and t > s):
                side = "below" if flavor == "q" else "above"
                return Verdict(False, "c", f"f{s}{t} must be 0 ({t} is {side} {s})")
    return Verdict(True)


# ---------------------------------------------------------------------------
# the order


@dataclass
class Witness:
    """How ``f^q_s`` restricted to ``u^p`` arises from ``p``."""

    point: Point
    case: str  # zero | shift | cut
    source: Point | None = None
    eps: int | None = None
    level: int | None = None

    def to_json(self) -> dict:
        d = {"point": list(self.point), "case": self.case}
        if self.source is not None:
            d["source"] = list(self.source)
        if self.eps is not None:
            d["eps"] = self.eps
        if self.level is not None:
            d["cut_level"] = self.level
        return d


@dataclass
class LeqResult:
    holds: bool
    clause: str = ""
    detail: str = ""
    certificate: list = field(default_factory=list)

    def __bool__(self):
        return self.holds

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "clause": self.clause,
            "detail": self.detail,
            "certificate": [w.to_json() for w in self.certificate],
        }


def explain_restriction(params: SParams, p: Condition, level: int, g: frozenset) -> Witness | None:
    """Find how ``g`` (a function on ``u^p``) is obtained from ``p`` for a point at ``level``.

    Tries the zero function, then truncations of ``f^p`` (same level when
    ``level`` is in ``w^p``, any level otherwise), in a fixed search order.
    Column thresholds range over ``0..chi`` inclusive in both flavours.
    """
    s = (level, None)
    if not g:
        return Witness(s, "zero")
    same = level in p.w
    for src, h in zip(p.u, p.f):
        j = src[0]
        if same and j != level:
            continue
        op = shift_below if p.flavor == "q" else shift_above
        for eps in range(params.chi[j] + 1):
            if op(h, j, eps) == g:
                return Witness(s, "shift", src, eps)
    if p.flavor == "p" and not same:
        for src, h in zip(p.u, p.f):
            for jp in range(src[0] + 1):
                if cut_levels(h, jp) == g:
                    return Witness(s, "cut", src, level=jp)
    return None


def leq(params: SParams, p: Condition, q: Condition) -> LeqResult:
    """``p <= q`` in the flavour shared by both, with a per-point certificate."""
    if p.flavor != q.flavor:
        raise ValueError("conditions of different flavours")
    for c in (p, q):
        v = validate_condition(params.with_cap(max(params.ucap, len(c.u))), c)
        if not v:
            raise ValueError(f"invalid condition: clause ({v.clause}) {v.detail}")
    if not p.w <= q.w:
        return LeqResult(False, "alpha", f"levels {sorted(p.w - q.w)} missing")
    if not p.uset <= q.uset:
        return LeqResult(False, "alpha", f"points {sorted(p.uset - q.uset)} missing")
    for s, g in zip(p.u, p.f):
        if restrict(q.fn(s), p.uset) != g:
            return LeqResult(False, "beta", f"f{s} is not extended")
    cert = []
    for s, g in zip(q.u, q.f):
        wit = explain_restriction(params, p, s[0], restrict(g, p.uset))
        if wit is None:
            return LeqResult(False, "gamma", f"no case applies at {s}", cert)
        wit.point = s
        cert.append(wit)
    return LeqResult(True, certificate=cert)


def q_leq(params: SParams, p: Condition, q: Condition) -> LeqResult:
    if p.flavor != "q" or q.flavor != "q":
        raise ValueError("q_leq needs q-conditions")
    return leq(params, p, q)


def p_leq(params: SParams, p: Condition, q: Condition) -> LeqResult:
    if p.flavor != "p" or q.flavor != "p":
        raise ValueError("p_leq needs p-conditions")
    return leq(params, p, q)


# ---------------------------------------------------------------------------
# isomorphism


@dataclass
class IsoResult:
    ok: bool
    H: dict = field(default_factory=dict)
    clause: str = ""
    detail: str = ""

    def __bool__(self):
        return self.ok

    def inverse(self) -> dict:
        return {b: a for a, b in self.H.items()}

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "clause": self.clause,
            "detail": self.detail,
            "H": [[list(a), list(b)] for a, b in sorted(self.H.items())],
        }


def transport(g: Iterable[Point], H: dict) -> frozenset:
    return frozenset(H[t] for t in g)


def condition_iso(p: Condition, q: Condition) -> IsoResult:
    """The order isomorphism ``u^p -> u^q`` if it respects columns 0 and the functions."""
    if p.flavor != q.flavor:
        return IsoResult(False, clause="flavor", detail="different flavours")
    if len(p.u) != len(q.u):
        return IsoResult(False, clause="order", detail="u-sets have different sizes")
    H = dict(zip(p.u, q.u))
    for s, t in H.items():
        if (s[1] == 0) != (t[1] == 0):
            return IsoResult(False, H, "alpha", f"{s} -> {t} does not respect column 0")
    for s, g in zip(p.u, p.f):
        if transport(g, H) != q.fn(H[s]):
            return IsoResult(False, H, "beta", f"f{s} is not carried to f{H[s]}")
    return IsoResult(True, H)


# ---------------------------------------------------------------------------
# algebras


def condition_rows(params: SParams, c: Condition) -> list[frozenset]:
    """The homomorphism family of ``c`` as supports (deduplicated, sorted)."""
    # the zero row is listed for q and arises from the level-0 cut for p;
    # adding it unconditionally only matters for the empty p-condition
    rows: set[frozenset] = {frozenset()}
    if c.flavor == "q":
        for (i, _), g in zip(c.u, c.f):
            for z in range(params.chi[i] + 1):
                rows.add(shift_below(g, i, z))
    else:
        for (i, _), g in zip(c.u, c.f):
            for e in range(params.chi[i] + 1):
                rows.add(shift_above(g, i, e))
            for j in range(i + 1):
                rows.add(cut_levels(g, j))
    return sorted(rows, key=lambda r: sorted(r))


def condition_algebra(params: SParams, c: Condition) -> PresentedAlgebra:
    """Generators are the points of ``u`` in grid order; labels are the points."""
    index = {s: k for k, s in enumerate(c.u)}
    rows = [sum(1 << index[t] for t in r) for r in condition_rows(params, c)]
    return PresentedAlgebra.from_rows(len(c.u), rows, labels=c.u)


def chain_union_algebra(params: SParams, chain: Sequence[Condition]) -> PresentedAlgebra:
    """Algebra of the last condition of an increasing chain, checking each embedding.

    Raises ``ChainError`` with the index of the first failing step.
    """
    if not chain:
        raise ValueError("empty chain")
    algs = [condition_algebra(params, c) for c in chain]
    for k in range(len(chain) - 1):
        if not leq(params, chain[k], chain[k + 1]):
            raise ChainError(k, "not increasing")
        if not subalgebra_check(algs[k], algs[k + 1]):
            raise ChainError(k, "algebra does not embed")
    return algs[-1]


class ChainError(ValueError):
    def __init__(self, index: int, reason: str):
        super().__init__(f"chain fails between positions {index} and {index + 1}: {reason}")
        self.index = index


# ---------------------------------------------------------------------------
# exhaustive enumeration at tiny parameters


def enumerate_conditions(params: SParams, flavor: str) -> list[Condition]:
    """Every valid condition with ``|u| <= ucap``, ordered by size then shape."""
    out = []
    pts = params.points()
    for w_size in range(params.J + 1):
        for w in combinations(range(params.J), w_size):
            base = [(i, 0) for i in w]
            extra = [p for p in pts if p[0] in w and p[1] > 0]
            for k in range(len(extra) + 1):
                if len(base) + k > params.ucap:
                    break
                for more in combinations(extra, k):
                    u = tuple(sorted(base + list(more)))
                    out.extend(_fill(flavor, frozenset(w), u))
    out.sort(key=lambda c: (len(c.u), c.u, [sorted(g) for g in c.f]))
    return out


def _fill(flavor: str, w: frozenset, u: tuple):
    choices = []
    for s in u:
        free = [t for t in u if (t > s if flavor == "q" else t < s)]
        opts = []
        for bits in product((0, 1), repeat=len(free)):
            opts.append(frozenset([s] + [t for t, b in zip(free, bits) if b]))
        choices.append(opts)
    for fs in product(*choices):
        yield Condition(flavor, w, u, tuple(fs))
