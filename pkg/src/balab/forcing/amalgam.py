"""Common upper bounds: pairs of isomorphic conditions and the three-condition
constructions used to force inequalities between transported conjunctions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..algebra import find_separating_row
from ..terms import Not, Term, conj, literal
from .conditions import (
    Condition,
    SParams,
    condition_algebra,
    condition_iso,
    cut_levels,
    explain_restriction,
    leq,
    restrict,
    shift_above,
    shift_below,
    validate_condition,
)


class PreconditionError(ValueError):
    def __init__(self, clause: str, detail: str):
        super().__init__(f"precondition ({clause}) violated: {detail}")
        self.clause = clause


def glue(parts: Sequence[tuple[frozenset, frozenset]]) -> frozenset:
    """Union of functions given as ``(support, domain)``; they must agree on overlaps."""
    for a in range(len(parts)):
        for b in range(a + 1, len(parts)):
            (ga, da), (gb, db) = parts[a], parts[b]
            ov = da & db
            if ga & ov != gb & ov:
                raise PreconditionError("glue", "pieces disagree on a shared point")
    out = frozenset()
    for g, _ in parts:
        out |= g
    return out


def _check_iso(p: Condition, q: Condition, H: dict | None) -> dict:
    iso = condition_iso(p, q)
    if not iso:
        raise PreconditionError("iso", f"{iso.clause}: {iso.detail}")
    if H is not None and dict(H) != iso.H:
        raise PreconditionError("iso", "supplied map is not the order isomorphism")
    for s in p.uset & q.uset:
        if iso.H[s] != s:
            raise PreconditionError("ii", f"isomorphism moves shared point {s}")
    return iso.H


def _finish(params: SParams, flavor: str, w, fmap: dict) -> Condition:
    r = Condition.make(flavor, w, fmap)
    v = validate_condition(params, r)
    if not v:
        raise PreconditionError("result", f"amalgam invalid: ({v.clause}) {v.detail}")
    return r


# ---------------------------------------------------------------------------
# pairs


def q_pair_amalgamate(params: SParams, p: Condition, q: Condition, H: dict | None = None) -> Condition:
    """Upper bound of isomorphic q-conditions whose level sets are blockwise ordered:
    shared levels, then levels only in ``p``, then levels only in ``q``."""
    if p.flavor != "q" or q.flavor != "q":
        raise ValueError("q_pair_amalgamate needs q-conditions")
    H = _check_iso(p, q, H)
    Hinv = {b: a for a, b in H.items()}
    common, ponly, qonly = p.w & q.w, p.w - q.w, q.w - p.w
    if common and ponly and max(common) >= min(ponly):
        raise PreconditionError("iii", "shared levels must lie below the levels only in p")
    if ponly and qonly and max(ponly) >= min(qonly):
        raise PreconditionError("iii", "levels only in p must lie below the levels only in q")
    if common and qonly and not ponly and max(common) >= min(qonly):
        raise PreconditionError("iii", "shared levels must lie below the levels only in q")
    up, uq = p.uset, q.uset
    fmap = {}
    for s in p.u:
        i, x = s
        if i in common:
            g = glue([(p.fn(s), up), (shift_below(q.fn(H[s]), i, x), uq)])
        else:
            g = glue([(p.fn(s), up), (q.fn(H[s]), uq)])
        fmap[s] = g
    for s in q.u:
        i, x = s
        if i in common:
            g = glue([(shift_below(p.fn(Hinv[s]), i, x), up), (q.fn(s), uq)])
        else:
            g = glue([(frozenset(), up), (q.fn(s), uq)])
        if s in fmap and fmap[s] != g:
            raise PreconditionError("glue", f"the two descriptions of f{s} differ")
        fmap[s] = g
    return _finish(params, "q", p.w | q.w, fmap)


def p_pair_amalgamate(params: SParams, p: Condition, q: Condition, H: dict | None = None) -> Condition:
    """Upper bound of isomorphic p-conditions whose isomorphism fixes shared points."""
    if p.flavor != "p" or q.flavor != "p":
        raise ValueError("p_pair_amalgamate needs p-conditions")
    H = _check_iso(p, q, H)
    Hinv = {b: a for a, b in H.items()}
    common = p.w & q.w
    up, uq = p.uset, q.uset
    fmap = {}
    for s in p.u:
        i, x = s
        if i in common:
            g = glue([(p.fn(s), up), (shift_above(q.fn(H[s]), i, x + 1), uq)])
        else:
            g = glue([(p.fn(s), up), (cut_levels(q.fn(H[s]), i), uq)])
        fmap[s] = g
    for s in q.u:
        i, x = s
        if i in common:
            g = glue([(shift_above(p.fn(Hinv[s]), i, x + 1), up), (q.fn(s), uq)])
        else:
            g = glue([(cut_levels(p.fn(Hinv[s]), i), up), (q.fn(s), uq)])
        if s in fmap and fmap[s] != g:
            raise PreconditionError("glue", f"the two descriptions of f{s} differ")
        fmap[s] = g
    return _finish(params, "p", p.w | q.w, fmap)


# ---------------------------------------------------------------------------
# triples


@dataclass
class TripleInstance:
    """``q`` extends ``q0``; ``q0, q1, q2`` are pairwise isomorphic and ``taus[k]``
    is the conjunction over grid points carried between them.

    ``taus[k]`` is a list of ``(point, neg)`` literals.
    """

    flavor: str
    params: SParams
    q: Condition
    q0: Condition
    q1: Condition
    q2: Condition
    taus: tuple
    level_star: int | None = None


@dataclass
class TripleResult:
    r: Condition
    holds: bool  # the inequality between the conjunctions holds in the algebra of r
    counterexample: frozenset | None
    cases: dict
    dominates: bool = True  # r extends q, q1 and q2

    @property
    def ok(self) -> bool:
        return self.holds and self.dominates


def tau_term(c: Condition, lits) -> Term:
    """The conjunction as a term over the generators of ``c`` (points in grid order)."""
    idx = {s: k for k, s in enumerate(c.u)}
    return conj([literal(idx[s], neg) for s, neg in lits])


def _eval(g: frozenset, lits) -> int:
    return int(all((s in g) != bool(neg) for s, neg in lits))


def _triple_common(inst: TripleInstance):
    q, q0, q1, q2 = inst.q, inst.q0, inst.q1, inst.q2
    for c in (q, q0, q1, q2):
        if c.flavor != inst.flavor:
            raise PreconditionError("flavor", "mixed flavours")
        v = validate_condition(inst.params, c)
        if not v:
            raise PreconditionError("valid", f"({v.clause}) {v.detail}")
    if not leq(inst.params, q0, q):
        raise PreconditionError("q0<=q", "q does not extend q0")
    H = {}
    for a, ca in enumerate((q0, q1, q2)):
        for b, cb in enumerate((q0, q1, q2)):
            iso = condition_iso(ca, cb)
            if not iso:
                raise PreconditionError("iso", f"q{a} and q{b} are not isomorphic: {iso.detail}")
            for s in ca.uset & cb.uset:
                if iso.H[s] != s:
                    raise PreconditionError("iso", f"isomorphism q{a}->q{b} moves shared point {s}")
            H[a, b] = iso.H
    t0, t1, t2 = inst.taus
    for (a, ta), (b, tb) in [((0, t0), (1, t1)), ((0, t0), (2, t2))]:
        if [(H[a, b][s], n) for s, n in ta] != list(tb):
            raise PreconditionError("tau", f"conjunction of q{b} is not the transport of q{a}'s")
    return H


def q_triple_amalgamate(inst: TripleInstance) -> TripleResult:
    """Build ``r >= q, q1, q2`` forcing ``tau0 <= tau1 v tau2`` (q-flavour).

    Setup checked here: ``u^q`` meets ``u^q1`` and ``u^q2`` exactly in the heart
    ``u*`` shared by ``q0, q1, q2``, and every level of ``q`` lies below the
    levels of ``q2`` outside the heart.
    """
    if inst.flavor != "q":
        raise ValueError("q_triple_amalgamate needs a q-instance")
    params, q, q0, q1, q2 = inst.params, inst.q, inst.q0, inst.q1, inst.q2
    H = _triple_common(inst)
    ustar = q0.uset & q1.uset
    if q0.uset & q2.uset != ustar or q1.uset & q2.uset != ustar:
        raise PreconditionError("heart", "pairwise overlaps of q0, q1, q2 differ")
    if q.uset & q1.uset != ustar or q.uset & q2.uset != ustar:
        raise PreconditionError("heart", "q meets q1 or q2 outside the heart")
    wstar = {i for i, x in ustar if x == 0}
    own2 = q2.w - wstar
    if own2 and q.w and max(q.w) >= min(own2):
        raise PreconditionError("levels", "sup of the levels of q must lie below the own levels of q2")
    t2 = inst.taus[2]
    uq, u1, u2, u0 = q.uset, q1.uset, q2.uset, q0.uset
    sup_w = max(wstar) if wstar else -1
    zero = frozenset()
    fmap, cases = {}, {}

    def put(s, parts, case):
        g = glue(parts)
        if s in fmap and fmap[s] != g:
            raise PreconditionError("glue", f"the descriptions of f{s} differ")
        fmap[s] = g
        cases[s] = case

    for s in q1.u:
        i, x = s
        if i in wstar:
            put(s, [(q.fn(H[1, 0][s]), uq), (q1.fn(s), u1), (q2.fn(H[1, 2][s]), u2)], "1")
        else:
            put(s, [(zero, uq), (q1.fn(s), u1), (zero, u2)], "2")
    for s in q.u:
        if s in ustar:
            continue
        i, x = s
        g = restrict(q.fn(s), u0)
        if not g:
            put(s, [(q.fn(s), uq), (zero, u1), (zero, u2)], "3-zero")
            continue
        wit = _q_source(params, q0, i, g)
        if wit is None:
            raise PreconditionError("q0<=q", f"no truncation of q0 explains f{s}")
        src, eps = wit
        j = src[0]
        if j in wstar and j < i <= sup_w:
            b1 = shift_below(q1.fn(H[0, 1][src]), j, params.chi[j])
            b2 = shift_below(q2.fn(H[0, 2][src]), j, params.chi[j])
            case = "3-alpha"
        elif i == j and j in wstar:
            e = max(eps, x)
            b1 = shift_below(q1.fn(H[0, 1][src]), j, e)
            b2 = shift_below(q2.fn(H[0, 2][src]), j, e)
            case = "3-beta"
        elif j in wstar and i < j:
            b1 = shift_below(q1.fn(H[0, 1][src]), j, eps)
            b2 = shift_below(q2.fn(H[0, 2][src]), j, eps)
            case = "3-gamma"
        else:
            b1 = zero
            b2 = _q_delta_choice(params, q2, wstar, t2)
            case = "3-delta"
        put(s, [(q.fn(s), uq), (b1, u1), (b2, u2)], case)
    for s in q2.u:
        if s in ustar:
            continue
        i, x = s
        if i in wstar:
            a = shift_below(q.fn(H[2, 0][s]), i, x)
            b = shift_below(q1.fn(H[2, 1][s]), i, x)
            put(s, [(a, uq), (b, u1), (q2.fn(s), u2)], "4")
        else:
            put(s, [(zero, uq), (zero, u1), (q2.fn(s), u2)], "5")
    r = _finish(params, "q", q.w | q1.w | q2.w, fmap)
    alg = condition_algebra(params, r)
    terms = [tau_term(r, t) for t in inst.taus]
    row = find_separating_row(alg, terms[0], [terms[1], terms[2]])
    return TripleResult(r, row is None, _row_support(r, row), cases, _dominates(params, r, (q, q1, q2)))


def _q_source(params: SParams, q0: Condition, level: int, g: frozenset):
    # (j, zeta) in u^q0 and zeta <= eps <= chi_j with g = (f_{j,zeta})_eps; j = level if level in w^q0
    for src, h in zip(q0.u, q0.f):
        j, z = src
        if level in q0.w and j != level:
            continue
        for eps in range(z, params.chi[j] + 1):
            if shift_below(h, j, eps) == g:
                return src, eps
    return None


def _q_delta_choice(params: SParams, q2: Condition, wstar: set, t2) -> frozenset:
    # a truncation of some f^q2 vanishing on heart levels, preferably with tau2 = 1
    best = None
    for src, h in zip(q2.u, q2.f):
        j, z = src
        for eps in range(z, params.chi[j] + 1):
            g = shift_below(h, j, eps)
            if any(t[0] in wstar for t in g):
                continue
            if _eval(g, t2):
                return g
            if best is None:
                best = g
    return best if best is not None else frozenset()


def _dominates(params: SParams, r: Condition, below) -> bool:
    big = params.with_cap(max(params.ucap, len(r.u)))
    return all(leq(big, c, r) for c in below)


def _row_support(r: Condition, row):
    if row is None:
        return None
    return frozenset(s for k, s in enumerate(r.u) if (row >> k) & 1)


def p_triple_amalgamate(inst: TripleInstance) -> TripleResult:
    """Build ``r >= q, q1, q2`` forcing ``tau1 & -tau2 <= tau0`` (p-flavour).

    Setup checked here: ``q1`` and ``q2`` have the same levels, ``u^q`` meets each
    of them exactly in the heart ``u*`` of ``q0, q1, q2``, and the isomorphisms
    from ``q1``, ``q2`` to ``q0`` never move a point upwards.
    """
    if inst.flavor != "p":
        raise ValueError("p_triple_amalgamate needs a p-instance")
    params, q, q0, q1, q2 = inst.params, inst.q, inst.q0, inst.q1, inst.q2
    H = _triple_common(inst)
    ustar = q0.uset & q1.uset & q2.uset
    if q0.uset & q1.uset != ustar or q0.uset & q2.uset != ustar:
        raise PreconditionError("heart", "q0 meets q1 or q2 outside the common heart")
    if q1.w != q2.w:
        raise PreconditionError("levels", "q1 and q2 must have the same levels")
    if q.uset & q1.uset != ustar or q.uset & q2.uset != ustar:
        raise PreconditionError("heart", "q meets q1 or q2 outside the heart")
    for k, ck in ((1, q1), (2, q2)):
        for s in ck.u:
            if H[k, 0][s] > s:
                raise PreconditionError("order", f"isomorphism q{k}->q0 moves {s} upwards")
    t0 = inst.taus[0]
    uq, u1, u2, u0 = q.uset, q1.uset, q2.uset, q0.uset
    zero = frozenset()
    fmap, cases = {}, {}

    def put(s, parts, case):
        g = glue(parts)
        if s in fmap and fmap[s] != g:
            raise PreconditionError("glue", f"the descriptions of f{s} differ")
        fmap[s] = g
        cases[s] = case

    def best_eps(src):
        # threshold making the truncated q0-function satisfy tau0, when possible
        j = src[0]
        h0 = q0.fn(src)
        for e in range(params.chi[j], -1, -1):
            if _eval(shift_above(h0, j, e), t0):
                return e
        return params.chi[j]

    for s in q1.u:
        i, x = s
        src = H[1, 0][s]
        if s in u2:
            if i in q.w:
                put(s, [(q.fn(src), uq), (q1.fn(s), u1), (q2.fn(s), u2)], "1")
            else:
                e = best_eps(src)
                put(s, [(shift_above(q.fn(src), src[0], e), uq), (q1.fn(s), u1), (q2.fn(s), u2)], "2")
        else:
            e = best_eps(src)
            a = shift_above(q.fn(src), src[0], e)
            c = shift_above(q2.fn(H[1, 2][s]), i, x + 1)
            put(s, [(a, uq), (q1.fn(s), u1), (c, u2)], "4")
    for s in q2.u:
        if s in u1:
            continue
        src = H[2, 0][s]
        e = best_eps(src)
        a = shift_above(q.fn(src), src[0], e)
        put(s, [(a, uq), (q1.fn(H[2, 1][s]), u1), (q2.fn(s), u2)], "3")
    for s in q.u:
        if s in u1:
            continue
        i, x = s
        g = restrict(q.fn(s), u0)
        if not g:
            put(s, [(q.fn(s), uq), (zero, u1), (zero, u2)], "5-zero")
            continue
        wit = explain_restriction(params, q0, i, g)
        if wit is None:
            raise PreconditionError("q0<=q", f"no truncation of q0 explains f{s}")
        src = wit.source
        h1, h2 = q1.fn(H[0, 1][src]), q2.fn(H[0, 2][src])
        if wit.case == "cut":
            b1, b2, case = cut_levels(h1, wit.level), cut_levels(h2, wit.level), "5-gamma"
        elif i in q0.w:
            if i in q1.w:
                b1, b2 = shift_above(h1, i, wit.eps), shift_above(h2, i, wit.eps)
            else:
                b1, b2 = cut_levels(h1, i), cut_levels(h2, i)
            case = "5-alpha"
        else:
            ip = src[0]
            if ip in q1.w and ip < i:
                b1, b2 = shift_above(h1, ip, wit.eps), shift_above(h2, ip, wit.eps)
            else:
                b1, b2 = cut_levels(h1, i), cut_levels(h2, i)
            case = "5-beta"
        put(s, [(q.fn(s), uq), (b1, u1), (b2, u2)], case)
    r = _finish(params, "p", q.w | q1.w, fmap)
    alg = condition_algebra(params, r)
    terms = [tau_term(r, t) for t in inst.taus]
    lhs = conj([terms[1], Not(terms[2])])
    row = find_separating_row(alg, lhs, [terms[0]])
    return TripleResult(r, row is None, _row_support(r, row), cases, _dominates(params, r, (q, q1, q2)))


def triple_amalgamate(inst: TripleInstance) -> TripleResult:
    return q_triple_amalgamate(inst) if inst.flavor == "q" else p_triple_amalgamate(inst)
