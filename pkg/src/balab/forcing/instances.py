"""Random generators for triple-amalgamation instances.

The generators build the setup objects directly: a heart ``u*`` shared by three
isomorphic conditions ``q0, q1, q2``, a conjunction ``tau0`` over ``u^q0`` carried
to ``tau1, tau2``, and a random extension ``q`` of ``q0``.

Layout used for the q-flavour (levels listed bottom to top):
heart levels, then own levels of ``q1``, of ``q0`` and of ``q2``. At heart levels
a non-heart point has columns ``c1 < c0 < c2`` in ``q1, q0, q2``. Literals of
``tau0`` at levels up to a chosen own level of ``q0`` are negated. ``q`` adds
points below the own levels of ``q2`` and away from ``u^q1``, ``u^q2``.

Layout used for the p-flavour: heart levels, then own levels of ``q0``, then the
levels shared by ``q1`` and ``q2``. Up to a chosen level ``i*`` of ``q1`` the
two agree; above it they share column 0 and otherwise place ``q1`` columns
before ``q2`` columns. At heart levels non-heart points of ``q0`` come before
the (shared) ones of ``q1, q2``. ``q`` only uses levels below ``i*``.
"""

from __future__ import annotations

import random

from .amalgam import TripleInstance
from .conditions import Condition, SParams, cut_levels, leq, shift_above, shift_below


def _columns(rng: random.Random, slots: list[str], width: int):
    """Assign increasing columns to slots; ``"H"`` takes one shared column, a
    slot of width ``width`` takes ``width`` columns (one per condition)."""
    cols = []
    nxt = 0
    for k, kind in enumerate(slots):
        if k > 0:
            nxt += rng.randint(0, 1)
        if kind == "H":
            cols.append((nxt,))
            nxt += 1
        else:
            group = []
            for _ in range(width):
                group.append(nxt)
                nxt += 1 + (rng.random() < 0.3)
            cols.append(tuple(group))
            nxt = group[-1] + 1
    return cols, nxt


def _template_functions(rng: random.Random, flavor: str, n: int, density: float = 0.5):
    """Random valid functions on positions 0..n-1 (supports as position sets)."""
    out = []
    for a in range(n):
        free = range(a + 1, n) if flavor == "q" else range(a)
        out.append(frozenset([a] + [b for b in free if rng.random() < density]))
    return out


def _instantiate(flavor: str, points: list, template) -> Condition:
    fmap = {points[a]: frozenset(points[b] for b in g) for a, g in enumerate(template)}
    return Condition.make(flavor, {i for i, _ in points}, fmap)


def _random_tau(rng: random.Random, points: list, forced_neg_level: int | None):
    k = rng.randint(1, min(3, len(points)))
    picks = sorted(rng.sample(range(len(points)), k))
    lits = []
    for a in picks:
        neg = rng.randint(0, 1)
        if forced_neg_level is not None and points[a][0] <= forced_neg_level:
            neg = 1
        lits.append((a, neg))
    return lits


def _restriction_candidates(params: SParams, q0: Condition, level: int):
    """Functions on ``u^q0`` that a new point at ``level`` may restrict to."""
    cands = {frozenset()}
    same = level in q0.w
    for src, h in zip(q0.u, q0.f):
        j = src[0]
        if same and j != level:
            continue
        for e in range(params.chi[j] + 1):
            cands.add(shift_below(h, j, e) if q0.flavor == "q" else shift_above(h, j, e))
        if q0.flavor == "p" and not same:
            for jp in range(j + 1):
                cands.add(cut_levels(h, jp))
    return sorted(cands, key=sorted)


def _extend(rng: random.Random, params: SParams, q0: Condition, new_points: list) -> Condition:
    """Random ``q >= q0`` with ``u^q = u^q0`` plus ``new_points``."""
    flavor = q0.flavor

    def allowed(s, t):
        return t > s if flavor == "q" else t < s

    fmap = {}
    for s in q0.u:
        extra = [t for t in new_points if allowed(s, t) and rng.random() < 0.5]
        fmap[s] = q0.fn(s) | frozenset(extra)
    for s in sorted(new_points):
        cands = [g for g in _restriction_candidates(params, q0, s[0]) if all(allowed(s, t) for t in g)]
        g = rng.choice(cands)
        extra = [t for t in new_points if allowed(s, t) and rng.random() < 0.5]
        fmap[s] = g | frozenset(extra) | {s}
    w = q0.w | {i for i, _ in new_points}
    q = Condition.make(flavor, w, fmap)
    assert leq(params, q0, q), "generated extension is not above q0"
    return q


def _pick_new_points(rng: random.Random, params: SParams, q0: Condition, forbidden: set, levels_ok, count: int):
    chosen: list = []
    used = set(q0.u) | forbidden
    for _ in range(count * 4):
        if len(chosen) >= count:
            break
        i = rng.randrange(params.J)
        if not levels_ok(i):
            continue
        if i in q0.w or any(p[0] == i for p in chosen):
            x = rng.randrange(params.chi[i])
            pts = [(i, x)]
        else:
            pts = [(i, 0)] + ([(i, rng.randrange(1, params.chi[i]))] if params.chi[i] > 1 and rng.random() < 0.4 else [])
        if any(p in used for p in pts):
            continue
        for p in pts:
            used.add(p)
            chosen.append(p)
    return sorted(set(chosen))


def random_q_instance(rng: random.Random, max_heart_levels: int = 2, max_own: int = 2, max_new: int = 3) -> TripleInstance:
    nh = rng.randint(0, max_heart_levels)
    n_own = rng.randint(1, max_own)
    n_free = rng.randint(0, 2)
    J = nh + 3 * n_own + n_free
    levels = list(range(J))
    # free levels are sprinkled among the structured ones, but below the q2 block
    structured = sorted(rng.sample(levels[: J - n_own], nh + 2 * n_own)) + levels[J - n_own :]
    heart, o1, o0, o2 = (
        structured[:nh],
        structured[nh : nh + n_own],
        structured[nh + n_own : nh + 2 * n_own],
        structured[nh + 2 * n_own :],
    )
    chi = [1] * J
    pts = {0: [], 1: [], 2: []}
    for h in heart:
        slots = ["H"] + [rng.choice("HM") for _ in range(rng.randint(0, 2))]
        cols, width = _columns(rng, slots, 3)
        chi[h] = width + rng.randint(0, 1)
        for kind, c in zip(slots, cols):
            if kind == "H":
                for k in range(3):
                    pts[k].append((h, c[0]))
            else:
                # c1 < c0 < c2
                pts[1].append((h, c[0]))
                pts[0].append((h, c[1]))
                pts[2].append((h, c[2]))
    for k_own in range(n_own):
        ncols = rng.randint(1, 3)
        cols = [0] + sorted(rng.sample(range(1, 5), ncols - 1))
        for k, lev in ((1, o1[k_own]), (0, o0[k_own]), (2, o2[k_own])):
            chi[lev] = max(cols) + 1 + rng.randint(0, 1)
            pts[k] += [(lev, c) for c in cols]
    for lev in range(J):
        if chi[lev] == 1 and lev not in heart + o1 + o0 + o2:
            chi[lev] = rng.randint(1, 3)
    params = SParams(J, tuple(chi), ucap=64)
    for k in pts:
        pts[k].sort()
    template = _template_functions(rng, "q", len(pts[0]))
    q0, q1, q2 = (_instantiate("q", pts[k], template) for k in (0, 1, 2))
    level_star = rng.choice(o0)
    lits = _random_tau(rng, pts[0], level_star)
    taus = tuple([(pts[k][a], neg) for a, neg in lits] for k in (0, 1, 2))
    forbidden = set(pts[1]) | set(pts[2])
    o1set, o2min = set(o1), min(o2)
    new = _pick_new_points(rng, params, q0, forbidden, lambda i: i < o2min and i not in o1set, rng.randint(0, max_new))
    q = _extend(rng, params, q0, new)
    return TripleInstance("q", params, q, q0, q1, q2, taus, level_star)


def random_p_instance(rng: random.Random, max_heart_levels: int = 2, max_own: int = 2, max_new: int = 3) -> TripleInstance:
    nh = rng.randint(0, max_heart_levels)
    n_own = rng.randint(1, max_own)
    n_free = rng.randint(0, 2)
    J = nh + 2 * n_own + n_free
    levels = list(range(J))
    structured = sorted(rng.sample(levels, nh + 2 * n_own))
    heart = structured[:nh]
    a0 = structured[nh : nh + n_own]
    b = structured[nh + n_own :]
    i_star = rng.choice(b)
    chi = [1] * J
    pts = {0: [], 1: [], 2: []}
    for h in heart:
        slots = ["H"] + [rng.choice("HM") for _ in range(rng.randint(0, 2))]
        cols, width = _columns(rng, slots, 2)
        chi[h] = width + rng.randint(0, 1)
        for kind, c in zip(slots, cols):
            if kind == "H":
                for k in range(3):
                    pts[k].append((h, c[0]))
            else:
                # q0 first, then the point shared by q1 and q2
                pts[0].append((h, c[0]))
                pts[1].append((h, c[1]))
                pts[2].append((h, c[1]))
    for k_own in range(n_own):
        lev0, lev1 = a0[k_own], b[k_own]
        if lev1 <= i_star:
            ncols = rng.randint(1, 3)
            cols12 = [0] + sorted(rng.sample(range(1, 5), ncols - 1))
            c1 = c2 = cols12
        else:
            slots = ["H"] + [rng.choice("HM") for _ in range(rng.randint(0, 2))]
            cols, width = _columns(rng, slots, 2)
            c1 = [c[0] for c in cols]
            c2 = [c[-1] for c in cols]
        chi[lev1] = max(c1 + c2) + 1 + rng.randint(0, 1)
        pts[1] += [(lev1, c) for c in c1]
        pts[2] += [(lev1, c) for c in c2]
        c0 = list(range(len(c1)))
        chi[lev0] = len(c0) + rng.randint(0, 1)
        pts[0] += [(lev0, c) for c in c0]
    for lev in range(J):
        if chi[lev] == 1 and lev not in heart + a0 + b:
            chi[lev] = rng.randint(1, 3)
    params = SParams(J, tuple(chi), ucap=64)
    for k in pts:
        pts[k].sort()
    template = _template_functions(rng, "p", len(pts[0]))
    q0, q1, q2 = (_instantiate("p", pts[k], template) for k in (0, 1, 2))
    lits = _random_tau(rng, pts[0], None)
    taus = tuple([(pts[k][a], neg) for a, neg in lits] for k in (0, 1, 2))
    forbidden = set(pts[1]) | set(pts[2])
    bset = set(b)
    new = _pick_new_points(rng, params, q0, forbidden, lambda i: i < i_star and i not in bset, rng.randint(0, max_new))
    q = _extend(rng, params, q0, new)
    return TripleInstance("p", params, q, q0, q1, q2, taus, i_star)


def random_instance(rng: random.Random, flavor: str) -> TripleInstance:
    return random_q_instance(rng) if flavor == "q" else random_p_instance(rng)
