import random
import sys
from pathlib import Path

from hypothesis import settings, strategies as st

from balab.algebra import PresentedAlgebra
from balab.terms import And, Const, Not, Or, Var

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")

ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "data"
GOLDEN = Path(__file__).parent / "golden"


def terms(n: int, max_leaves: int = 8):
    """Random terms over x0..x{n-1}."""
    leaves = st.one_of(st.builds(Const, st.sampled_from([0, 1])), st.builds(Var, st.integers(0, n - 1)))

    def extend(inner):
        return st.one_of(
            st.builds(Not, inner),
            st.builds(And, st.tuples(inner, inner)),
            st.builds(Or, st.tuples(inner, inner)),
            st.builds(lambda xs: And(tuple(xs)), st.lists(inner, min_size=2, max_size=3)),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


@st.composite
def algebras(draw, max_n: int = 4, max_rows: int = 8):
    n = draw(st.integers(1, max_n))
    rows = draw(st.lists(st.integers(0, (1 << n) - 1), max_size=max_rows))
    return PresentedAlgebra.from_rows(n, rows)


@st.composite
def algebra_and_terms(draw, k: int = 2, max_n: int = 4, max_rows: int = 8):
    alg = draw(algebras(max_n, max_rows))
    return alg, [draw(terms(alg.n)) for _ in range(k)]


def random_term(rng: random.Random, n: int, depth: int = 3):
    if depth == 0 or rng.random() < 0.3:
        return Var(rng.randrange(n)) if rng.random() < 0.9 else Const(rng.randint(0, 1))
    kind = rng.randrange(3)
    if kind == 0:
        return Not(random_term(rng, n, depth - 1))
    args = tuple(random_term(rng, n, depth - 1) for _ in range(rng.randint(2, 3)))
    return And(args) if kind == 1 else Or(args)


def random_algebra(rng: random.Random, max_n: int, max_rows: int) -> PresentedAlgebra:
    n = rng.randint(1, max_n)
    rows = [rng.randrange(1 << n) for _ in range(rng.randint(0, max_rows))]
    return PresentedAlgebra.from_rows(n, rows)
