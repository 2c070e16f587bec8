"""Finite Boolean algebras presented by homomorphism rows, separated sequences,
base-derived algebras and finite forcing-condition posets."""

from .algebra import (
    PresentedAlgebra,
    atoms,
    closure,
    equal_holds,
    is_nonzero,
    leq_holds,
    oracle_leq,
    subalgebra_check,
)
from .terms import evaluate_hom, format_term, parse_term

__all__ = [
    "PresentedAlgebra",
    "atoms",
    "closure",
    "equal_holds",
    "evaluate_hom",
    "format_term",
    "is_nonzero",
    "leq_holds",
    "oracle_leq",
    "parse_term",
    "subalgebra_check",
]
