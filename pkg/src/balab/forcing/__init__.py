"""Finite condition posets on a grid of levels and columns, and their amalgams."""

from .amalgam import (
    PreconditionError,
    TripleInstance,
    TripleResult,
    p_pair_amalgamate,
    p_triple_amalgamate,
    q_pair_amalgamate,
    q_triple_amalgamate,
    triple_amalgamate,
)
from .conditions import (
    ChainError,
    Condition,
    SParams,
    chain_union_algebra,
    condition_algebra,
    condition_iso,
    cut_levels,
    enumerate_conditions,
    leq,
    p_leq,
    q_leq,
    shift_above,
    shift_below,
    validate_condition,
)

__all__ = [
    "ChainError",
    "Condition",
    "PreconditionError",
    "SParams",
    "TripleInstance",
    "TripleResult",
    "chain_union_algebra",
    "condition_algebra",
    "condition_iso",
    "cut_levels",
    "enumerate_conditions",
    "leq",
    "p_leq",
    "p_pair_amalgamate",
    "p_triple_amalgamate",
    "q_leq",
    "q_pair_amalgamate",
    "q_triple_amalgamate",
    "shift_above",
    "shift_below",
    "triple_amalgamate",
    "validate_condition",
]
