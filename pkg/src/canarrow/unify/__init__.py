from .diophantine import minimal_solutions
from .matching import b_match, first_match, matches
from .subsumption import distinct, instance_of, minimize, subsumes
from .unification import DEFAULT_MAX_UNIFIERS, UnifierSet, b_unify, unify

__all__ = [
    "DEFAULT_MAX_UNIFIERS",
    "UnifierSet",
    "b_match",
    "b_unify",
    "distinct",
    "first_match",
    "instance_of",
    "matches",
    "minimal_solutions",
    "minimize",
    "subsumes",
    "unify",
]
