"""Boolean terms over numbered generators x0, x1, ...

Grammar (whitespace insignificant)::

    term := or
    or   := and {"|" and}
    and  := lit {"&" lit}
    lit  := "!" lit | "0" | "1" | ident | "(" term ")"
    ident := "x" digits

Rows are integers: bit ``i`` of a row is the value the row assigns to ``x_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union


class TermSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class GeneratorRangeError(IndexError):
    pass


@dataclass(frozen=True)
class Const:
    value: int

    def __post_init__(self):
        if self.value not in (0, 1):
            raise ValueError("constant must be 0 or 1")


@dataclass(frozen=True)
class Var:
    index: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError("generator index must be non-negative")


@dataclass(frozen=True)
class Not:
    arg: "Term"


@dataclass(frozen=True)
class And:
    args: tuple

    def __post_init__(self):
        if len(self.args) < 2:
            raise ValueError("And needs at least two arguments")


@dataclass(frozen=True)
class Or:
    args: tuple

    def __post_init__(self):
        if len(self.args) < 2:
            raise ValueError("Or needs at least two arguments")


Term = Union[Const, Var, Not, And, Or]

ZERO = Const(0)
ONE = Const(1)


def conj(terms: Sequence[Term]) -> Term:
    """n-ary meet; the empty meet is 1."""
    terms = tuple(terms)
    if not terms:
        return ONE
    if len(terms) == 1:
        return terms[0]
    return And(terms)


def disj(terms: Sequence[Term]) -> Term:
    """n-ary join; the empty join is 0."""
    terms = tuple(terms)
    if not terms:
        return ZERO
    if len(terms) == 1:
        return terms[0]
    return Or(terms)


def literal(index: int, neg: int = 0) -> Term:
    """``x_index`` when ``neg == 0`` and its complement when ``neg == 1``."""
    return Not(Var(index)) if neg else Var(index)


def elementary(lits: Iterable[tuple[int, int]]) -> Term:
    """Elementary conjunction from ``(generator, neg)`` pairs with distinct generators."""
    lits = list(lits)
    seen = set()
    for g, _ in lits:
        if g in seen:
            raise ValueError(f"generator x{g} repeated in elementary conjunction")
        seen.add(g)
    return conj([literal(g, t) for g, t in lits])


# ---------------------------------------------------------------------------
# parsing / printing


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> Term:
        t = self.parse_or()
        if self.peek():
            raise TermSyntaxError(f"unexpected {self.peek()!r}", self.pos)
        return t

    def parse_or(self) -> Term:
        parts = [self.parse_and()]
        while self.peek() == "|":
            self.pos += 1
            parts.append(self.parse_and())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def parse_and(self) -> Term:
        parts = [self.parse_lit()]
        while self.peek() == "&":
            self.pos += 1
            parts.append(self.parse_lit())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def parse_lit(self) -> Term:
        c = self.peek()
        if c == "!":
            self.pos += 1
            return Not(self.parse_lit())
        if c in ("0", "1"):
            self.pos += 1
            return Const(int(c))
        if c == "x":
            start = self.pos
            self.pos += 1
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            digits = self.text[start + 1 : self.pos]
            if not digits:
                raise TermSyntaxError("expected digits after 'x'", self.pos)
            return Var(int(digits))
        if c == "(":
            self.pos += 1
            t = self.parse_or()
            if self.peek() != ")":
                raise TermSyntaxError("expected ')'", self.pos)
            self.pos += 1
            return t
        if not c:
            raise TermSyntaxError("unexpected end of input", self.pos)
        raise TermSyntaxError(f"unexpected {c!r}", self.pos)


def parse_term(text: str) -> Term:
    return _Parser(text).parse()


def format_term(t: Term) -> str:
    """Print ``t`` so that ``parse_term(format_term(t)) == t``."""
    if isinstance(t, Const):
        return str(t.value)
    if isinstance(t, Var):
        return f"x{t.index}"
    if isinstance(t, Not):
        inner = format_term(t.arg)
        if isinstance(t.arg, (And, Or)):
            inner = f"({inner})"
        return "!" + inner
    if isinstance(t, And):
        return " & ".join(f"({format_term(a)})" if isinstance(a, (And, Or)) else format_term(a) for a in t.args)
    if isinstance(t, Or):
        return " | ".join(f"({format_term(a)})" if isinstance(a, Or) else format_term(a) for a in t.args)
    raise TypeError(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# semantics


def generators(t: Term) -> frozenset[int]:
    if isinstance(t, Const):
        return frozenset()
    if isinstance(t, Var):
        return frozenset([t.index])
    if isinstance(t, Not):
        return generators(t.arg)
    out: set[int] = set()
    for a in t.args:
        out |= generators(a)
    return frozenset(out)


def check_range(t: Term, n: int) -> None:
    bad = [g for g in generators(t) if g >= n]
    if bad:
        raise GeneratorRangeError(f"generator x{min(bad)} out of range for |w|={n}")


def evaluate_hom(row: int, t: Term) -> int:
    """Value of ``t`` under the 0/1 assignment ``x_i -> bit i of row``."""
    if isinstance(t, Var):
        return (row >> t.index) & 1
    if isinstance(t, Not):
        return 1 - evaluate_hom(row, t.arg)
    if isinstance(t, And):
        for a in t.args:
            if not evaluate_hom(row, a):
                return 0
        return 1
    if isinstance(t, Or):
        for a in t.args:
            if evaluate_hom(row, a):
                return 1
        return 0
    return t.value


def to_dnf(t: Term) -> list[dict[int, int]]:
    """Disjunctive normal form as a list of elementary conjunctions.

    Each conjunct maps generator -> neg bit; contradictory conjuncts are dropped
    and duplicates removed. ``[]`` is the constant 0, ``[{}]`` the constant 1.
    """
    return _dnf(t, False)


def _merge(a: dict[int, int], b: dict[int, int]):
    out = dict(a)
    for g, v in b.items():
        if out.get(g, v) != v:
            return None
        out[g] = v
    return out


def _dedup(cs: list[dict[int, int]]) -> list[dict[int, int]]:
    seen = set()
    out = []
    for c in cs:
        key = tuple(sorted(c.items()))
        if key not in seen:
            seen.add(key)
            out.append(c)
    return out


def _dnf(t: Term, negate: bool) -> list[dict[int, int]]:
    if isinstance(t, Const):
        return [{}] if (t.value == 1) != negate else []
    if isinstance(t, Var):
        return [{t.index: 1 if negate else 0}]
    if isinstance(t, Not):
        return _dnf(t.arg, not negate)
    # De Morgan: a negated And behaves as an Or of negations and vice versa
    is_and = isinstance(t, And) != negate
    parts = [_dnf(a, negate) for a in t.args]
    if not is_and:
        return _dedup([c for p in parts for c in p])
    acc: list[dict[int, int]] = [{}]
    for p in parts:
        nxt = []
        for c in acc:
            for d in p:
                m = _merge(c, d)
                if m is not None:
                    nxt.append(m)
        acc = _dedup(nxt)
        if not acc:
            break
    return acc


def dnf_term(t: Term) -> Term:
    """Normal-form term: a join of elementary conjunctions (generators sorted)."""
    return disj([elementary(sorted(c.items())) for c in to_dnf(t)])


def rename(t: Term, mapping) -> Term:
    """Substitute generator ``i`` by generator ``mapping[i]``."""
    if isinstance(t, Const):
        return t
    if isinstance(t, Var):
        return Var(mapping[t.index])
    if isinstance(t, Not):
        return Not(rename(t.arg, mapping))
    return type(t)(tuple(rename(a, mapping) for a in t.args))
