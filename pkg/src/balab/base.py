"""Bases: families of equal-length strings with a set of split nodes, and the
Boolean algebra they determine.

Strings are tuples of ints over the alphabet ``range(m)``. ``chi`` holds block
boundaries ``0 = chi[0] < chi[1] < ... < chi[J]``; index ``a`` lies in block
``j`` when ``chi[j] <= a < chi[j+1]``.
"""

from __future__ import annotations

import bisect
import random
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .algebra import PresentedAlgebra, find_separating_row
from .separation import Kind, witness_homomorphisms
from .terms import Var, conj, literal

Str = tuple


def common_prefix(s: Sequence, t: Sequence) -> Str:
    k = 0
    while k < len(s) and k < len(t) and s[k] == t[k]:
        k += 1
    return tuple(s[:k])


def lex_less(s: Sequence, t: Sequence) -> bool:
    if len(s) != len(t):
        raise ValueError("lex_less needs strings of equal length")
    return tuple(s) < tuple(t)


def is_prefix(s: Sequence, t: Sequence, proper: bool = True) -> bool:
    if proper and len(s) >= len(t):
        return False
    return len(s) <= len(t) and tuple(t[: len(s)]) == tuple(s)


def comparable(s: Sequence, t: Sequence) -> bool:
    return is_prefix(s, t, proper=False) or is_prefix(t, s, proper=False)


@dataclass(frozen=True)
class Base:
    depth: int
    alphabet: int
    chi: tuple
    A: frozenset
    eta: tuple

    def __post_init__(self):
        chi = tuple(self.chi)
        if not chi or chi[0] != 0 or any(a >= b for a, b in zip(chi, chi[1:])):
            raise ValueError("chi must start at 0 and be strictly increasing")
        if len(self.eta) != chi[-1]:
            raise ValueError(f"expected {chi[-1]} strings, got {len(self.eta)}")
        eta = tuple(tuple(e) for e in self.eta)
        A = frozenset(tuple(a) for a in self.A)
        for s in eta + tuple(A):
            if any(not 0 <= c < self.alphabet for c in s):
                raise ValueError(f"string {s} leaves the alphabet")
        if any(len(e) != self.depth for e in eta):
            raise ValueError("all eta strings must have length depth")
        if any(len(a) >= self.depth for a in A):
            raise ValueError("strings in A must be shorter than depth")
        for j in range(len(chi) - 1):
            blk = eta[chi[j] : chi[j + 1]]
            if len(set(blk)) != len(blk):
                raise ValueError(f"equal strings inside block {j}")
        object.__setattr__(self, "chi", chi)
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "A", A)

    @property
    def L(self) -> int:
        return self.chi[-1]

    @property
    def J(self) -> int:
        return len(self.chi) - 1

    def block(self, a: int) -> int:
        if not 0 <= a < self.L:
            raise IndexError(f"index {a} out of range")
        return bisect.bisect_right(self.chi, a) - 1

    def block_range(self, j: int) -> range:
        return range(self.chi[j], self.chi[j + 1])

    def meet(self, a: int, b: int) -> Str:
        return common_prefix(self.eta[a], self.eta[b])

    def meet_in_A(self, a: int, b: int) -> bool:
        return self.meet(a, b) in self.A


def even_strings(depth: int, alphabet: int) -> frozenset:
    """All strings of even length below ``depth``."""
    return frozenset(s for n in range(0, depth, 2) for s in product(range(alphabet), repeat=n))


def interleaved_base(nu: Sequence[Sequence[int]], rho: Sequence[Sequence[int]], depth: int, alphabet: int, chi: Sequence[int]) -> Base:
    """Base whose ``eta_a`` alternates the block string ``nu_{j(a)}`` with ``rho_a``.

    ``eta_a(2k) = nu_{j(a)}(k)`` and ``eta_a(2k+1) = rho_a(k)``; ``A`` is the set of
    even-length strings.
    """
    if depth % 2:
        raise ValueError("depth must be even")
    half = depth // 2
    nu = [tuple(x) for x in nu]
    rho = [tuple(x) for x in rho]
    if len(nu) != len(chi) - 1:
        raise ValueError("need one nu string per block")
    if len(rho) != chi[-1]:
        raise ValueError("need one rho string per index")
    if any(len(x) != half for x in nu + rho):
        raise ValueError(f"nu and rho strings must have length {half}")
    if len(set(nu)) != len(nu):
        raise ValueError("nu strings must be pairwise distinct")
    if len(set(rho)) != len(rho):
        raise ValueError("rho strings must be pairwise distinct")
    eta = []
    for a in range(chi[-1]):
        j = bisect.bisect_right(chi, a) - 1
        s = []
        for k in range(half):
            s += [nu[j][k], rho[a][k]]
        eta.append(tuple(s))
    return Base(depth, alphabet, tuple(chi), even_strings(depth, alphabet), tuple(eta))


def random_interleaved_base(rng: random.Random, depth: int, alphabet: int, L: int, J: int | None = None) -> Base:
    """Random blocks and distinct random ``nu``/``rho`` strings."""
    half = depth // 2
    pool = list(product(range(alphabet), repeat=half))
    if L > len(pool):
        raise ValueError(f"at most {len(pool)} distinct rho strings of length {half}")
    if J is None:
        J = rng.randint(1, min(L, len(pool)))
    cuts = sorted(rng.sample(range(1, L), J - 1)) if J > 1 else []
    chi = [0] + cuts + [L]
    nu = rng.sample(pool, J)
    rho = rng.sample(pool, L)
    return interleaved_base(nu, rho, depth, alphabet, chi)


EXAMPLE_NU = ["201", "100", "002", "121"]
EXAMPLE_RHO = ["102", "110", "111", "000", "001", "010", "112", "021", "222", "002", "120", "101"]
EXAMPLE_CHI = (0, 2, 6, 9, 12)


def example_base() -> Base:
    """A 12-index interleaved base over 3 letters with four blocks."""
    digits = lambda xs: [tuple(int(c) for c in x) for x in xs]
    return interleaved_base(digits(EXAMPLE_NU), digits(EXAMPLE_RHO), 6, 3, EXAMPLE_CHI)


# ---------------------------------------------------------------------------
# the algebra of a base


def f_b_row(b: Base, a: int) -> int:
    """Row ``f_a`` as a bitmask over indices: 1 at ``a`` and at every ``c`` with
    the meet of ``eta_a, eta_c`` in ``A`` and ``eta_a`` lexicographically first."""
    if not 0 <= a < b.L:
        raise IndexError(f"index {a} out of range")
    row = 1 << a
    for c in range(b.L):
        if c != a and b.meet_in_A(a, c) and lex_less(b.eta[a], b.eta[c]):
            row |= 1 << c
    return row


def algebra_from_base(b: Base) -> PresentedAlgebra:
    return PresentedAlgebra.from_rows(b.L, [f_b_row(b, a) for a in range(b.L)])


# ---------------------------------------------------------------------------
# axiom checks


@dataclass
class BaseVerdict:
    axiom: str
    holds: bool
    witness: dict = field(default_factory=dict)
    refused: bool = False

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "holds": self.holds, "refused": self.refused, "witness": self.witness}


def _fmt(s: Sequence[int]) -> str:
    return "".join(map(str, s)) or "-"


def _avoiding_set(L: int, edge, size: int, max_nodes: int):
    """A set of ``size`` indices with no ``edge(a, b)`` for ``a < b`` inside it.

    Returns (set or None, exhausted_flag).
    """
    adj = [0] * L
    for a in range(L):
        for c in range(a + 1, L):
            if edge(a, c):
                adj[a] |= 1 << c
                adj[c] |= 1 << a
    nodes = 0

    def grow(chosen, allowed):
        nonlocal nodes
        if len(chosen) == size:
            return chosen
        if len(chosen) + bin(allowed).count("1") < size:
            return None
        while allowed:
            nodes += 1
            if nodes > max_nodes:
                raise _Exhausted
            v = (allowed & -allowed).bit_length() - 1
            allowed &= ~(1 << v)
            got = grow(chosen + [v], allowed & ~adj[v])
            if got:
                return got
        return None

    try:
        return grow([], (1 << L) - 1), False
    except _Exhausted:
        return None, True


class _Exhausted(Exception):
    pass


def check_axiom_b(b: Base) -> BaseVerdict:
    for j in range(b.J):
        rng_ = b.block_range(j)
        for a in rng_:
            for c in rng_:
                if a < c and b.meet_in_A(a, c):
                    return BaseVerdict("b", False, {"alpha": a, "beta": c, "meet": _fmt(b.meet(a, c))})
    return BaseVerdict("b", True)


def check_base(b: Base, y0: int, plus: bool = False, max_nodes: int = 1_000_000) -> list[BaseVerdict]:
    """Verdicts for axiom (b), the size-``y0`` reading of (c), and optionally (c+).

    (c) fails when some ``y0``-subset has no pair meeting inside ``A``; (c+) fails
    when, for ``t`` in {0, 1}, some ``y0``-subset has no pair ``a < c`` meeting in
    ``A`` with ``eta_a <lex eta_c`` exactly when ``t = 0``.
    """
    if not 1 <= y0 <= b.L:
        raise ValueError(f"y0 must lie in 1..{b.L}")
    out = [check_axiom_b(b)]
    tests = [("c", lambda a, c: b.meet_in_A(a, c))]
    if plus:
        for t in (0, 1):
            tests.append((f"c+ t={t}", lambda a, c, t=t: b.meet_in_A(a, c) and lex_less(b.eta[a], b.eta[c]) == (t == 0)))
    for name, edge in tests:
        bad, exhausted = _avoiding_set(b.L, edge, y0, max_nodes)
        if exhausted:
            out.append(BaseVerdict(name, False, {"bound": max_nodes}, refused=True))
        elif bad is None:
            out.append(BaseVerdict(name, True, {"y0": y0}))
        else:
            out.append(BaseVerdict(name, False, {"y0": y0, "subset": bad}))
    return out


def replay_counterexample(b: Base, v: BaseVerdict) -> bool:
    """True when the recorded counterexample really violates its axiom."""
    w = v.witness
    if v.holds or v.refused:
        return False
    if v.axiom == "b":
        a, c = w["alpha"], w["beta"]
        return b.block(a) == b.block(c) and a != c and b.meet_in_A(a, c)
    ys = sorted(w["subset"])
    if len(ys) != w["y0"]:
        return False
    pairs = [(a, c) for i, a in enumerate(ys) for c in ys[i + 1 :]]
    if v.axiom == "c":
        return not any(b.meet_in_A(a, c) for a, c in pairs)
    t = int(v.axiom[-1])
    return not any(b.meet_in_A(a, c) and lex_less(b.eta[a], b.eta[c]) == (t == 0) for a, c in pairs)


@dataclass
class BlockVerdict:
    block: int
    holds: bool
    failed_at: int | None = None


def check_clx1(b: Base) -> list[BlockVerdict]:
    """Ideal-independence of each block's generator sequence in the base algebra."""
    alg = algebra_from_base(b)
    out = []
    for j in range(b.J):
        seq = [Var(a) for a in b.block_range(j)]
        wit = witness_homomorphisms(alg, seq, Kind.IDEAL_INDEPENDENT)
        out.append(BlockVerdict(j, wit.ok, None if wit.ok else b.chi[j] + wit.failed_at))
    return out


# ---------------------------------------------------------------------------
# configurations for the meet/lex domination claim


class HypothesisError(ValueError):
    def __init__(self, clause: str, detail: str):
        super().__init__(f"hypothesis ({clause}) violated: {detail}")
        self.clause = clause


@dataclass
class Clx2Config:
    """``sigma[k]`` strings, ``alpha[k]`` indices, ``alpha_l[l][k]`` indices, ``t[k]`` signs."""

    sigma: list
    alpha: list
    alpha_l: list
    t: list

    def lhs(self):
        return conj([literal(a, t) for a, t in zip(self.alpha, self.t)])

    def rhs(self):
        return [conj([literal(a, t) for a, t in zip(row, self.t)]) for row in self.alpha_l]

    def to_json(self) -> dict:
        return {"sigma": [_fmt(s) for s in self.sigma], "alpha": self.alpha, "alpha_l": self.alpha_l, "t": self.t}


def gamma_ii_witness(b: Base, a: int, col: Sequence[int]):
    """Positions ``(l1, l2, l3)`` in ``col`` for the nested-meet alternative, or None."""
    ea = b.eta[a]
    meets = [common_prefix(ea, b.eta[c]) for c in col]
    for l1, c1 in enumerate(col):
        if meets[l1] not in b.A or not lex_less(b.eta[c1], ea):
            continue
        for l2, c2 in enumerate(col):
            if meets[l2] not in b.A or not lex_less(ea, b.eta[c2]) or not is_prefix(meets[l1], meets[l2]):
                continue
            for l3 in range(len(col)):
                if is_prefix(meets[l2], meets[l3]):
                    return l1, l2, l3
    return None


def validate_clx2(b: Base, cfg: Clx2Config) -> None:
    """Raise ``HypothesisError`` naming the first failed clause."""
    k_star = len(cfg.sigma)
    if len(cfg.alpha) != k_star or len(cfg.t) != k_star or any(len(r) != k_star for r in cfg.alpha_l):
        raise HypothesisError("shape", "inconsistent lengths")
    if not cfg.alpha_l:
        raise HypothesisError("shape", "need at least one disjunct")
    for x in list(cfg.alpha) + [c for r in cfg.alpha_l for c in r]:
        if not 0 <= x < b.L:
            raise HypothesisError("shape", f"index {x} out of range")
    for k in range(k_star):
        for k2 in range(k + 1, k_star):
            if comparable(cfg.sigma[k], cfg.sigma[k2]):
                raise HypothesisError("alpha", f"sigma_{k} and sigma_{k2} are comparable")
    for k in range(k_star):
        for x in [cfg.alpha[k]] + [r[k] for r in cfg.alpha_l]:
            if not is_prefix(cfg.sigma[k], b.eta[x]):
                raise HypothesisError("beta", f"sigma_{k} is not a proper initial segment of eta_{x}")
    for k in range(k_star):
        col = [r[k] for r in cfg.alpha_l]
        if cfg.alpha[k] in col:
            continue
        if gamma_ii_witness(b, cfg.alpha[k], col) is None:
            raise HypothesisError("gamma", f"no alternative applies at k={k}")


def check_clx2_config(b: Base, cfg: Clx2Config, alg: PresentedAlgebra | None = None):
    """Validate the hypotheses, then decide the claimed inequality.

    Returns ``(holds, counterexample_row_or_None)``.
    """
    validate_clx2(b, cfg)
    alg = alg or algebra_from_base(b)
    row = find_separating_row(alg, cfg.lhs(), cfg.rhs())
    return row is None, row


def nested_capable(b: Base) -> list[int]:
    """Indices ``a`` for which some triple of other indices realises the nested-meet alternative."""
    return [a for a in range(b.L) if any(a not in tr for tr in _nested_triples(b, a, range(b.L)))]


def uses_nested(cfg: Clx2Config) -> bool:
    return any(a not in [row[k] for row in cfg.alpha_l] for k, a in enumerate(cfg.alpha))


def random_clx2_config(
    b: Base,
    rng: random.Random,
    max_k: int = 3,
    max_l: int = 5,
    retry_cap: int = 10_000,
    require_nested: bool = False,
):
    """Rejection-sample a hypothesis-valid configuration.

    With ``require_nested`` the first coordinate always uses the nested-meet
    alternative (the base must admit one). Returns ``(config, rejections)``;
    raises ``RuntimeError`` when the retry cap is hit.
    """
    # indices admitting the nested-meet alternative are favoured when drawing alpha
    triples = {a: [tr for tr in _nested_triples(b, a, range(b.L)) if a not in tr] for a in range(b.L)}
    if require_nested and not any(triples.values()):
        raise ValueError("base admits no nested-meet triple")
    rejections = 0
    for _ in range(retry_cap):
        cfg = _propose(b, rng, max_k, max_l, triples, require_nested)
        if cfg is None:
            rejections += 1
            continue
        try:
            validate_clx2(b, cfg)
        except HypothesisError:
            rejections += 1
            continue
        return cfg, rejections
    raise RuntimeError(f"retry cap {retry_cap} reached without a valid configuration")


def _propose(b: Base, rng: random.Random, max_k: int, max_l: int, triples: dict, force: bool = False):
    k_star = rng.randint(1, max_k)
    capable = [a for a in range(b.L) if triples[a]]
    alphas = rng.sample(range(b.L), min(k_star, b.L))
    if capable and (force or rng.random() < 0.5):
        alphas[0] = rng.choice(capable)
        if alphas[0] in alphas[1:]:
            return None
    k_star = len(alphas)
    l_star = rng.randint(3 if force else 1, max(max_l, 3) if force else max_l)
    sigmas, planted = [], []
    for k, a in enumerate(alphas):
        if l_star >= 3 and triples[a] and ((force and k == 0) or rng.random() < 0.7):
            # nested-meet alternative: sigma must sit below the shortest meet
            tr = rng.choice(triples[a])
            m1 = common_prefix(b.eta[a], b.eta[tr[0]])
            sigmas.append(b.eta[a][: rng.randint(0, len(m1))])
            planted.append(tr)
        else:
            sigmas.append(b.eta[a][: rng.randint(0, b.depth - 1)])
            planted.append(None)
    for i in range(k_star):
        for j in range(i + 1, k_star):
            if comparable(sigmas[i], sigmas[j]):
                return None
    cols = []
    for k, a in enumerate(alphas):
        ext = [c for c in range(b.L) if is_prefix(sigmas[k], b.eta[c])]
        if planted[k]:
            others = [c for c in ext if c != a]
            col = [rng.choice(others) for _ in range(l_star)]
            for p, c in zip(rng.sample(range(l_star), 3), planted[k]):
                col[p] = c
        else:
            col = [rng.choice(ext) for _ in range(l_star)]
            col[rng.randrange(l_star)] = a
        cols.append(col)
    alpha_l = [[cols[k][l] for k in range(k_star)] for l in range(l_star)]
    t = [rng.randint(0, 1) for _ in range(k_star)]
    return Clx2Config([tuple(s) for s in sigmas], alphas, alpha_l, t)


def _nested_triples(b: Base, a: int, cands: Sequence[int]):
    ea = b.eta[a]
    out = []
    for c1 in cands:
        m1 = common_prefix(ea, b.eta[c1])
        if m1 not in b.A or not lex_less(b.eta[c1], ea):
            continue
        for c2 in cands:
            m2 = common_prefix(ea, b.eta[c2])
            if m2 not in b.A or not lex_less(ea, b.eta[c2]) or not is_prefix(m1, m2):
                continue
            for c3 in cands:
                if is_prefix(m2, common_prefix(ea, b.eta[c3])):
                    out.append((c1, c2, c3))
    return out
