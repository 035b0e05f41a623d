from .canonical import b_canonical, b_equal, collection, make, make_from_multiset, replace_at
from .fresh import FreshSupply, fresh_rename, renaming
from .signature import OpDecl, Signature, Symbol, tuple_symbol
from .sorts import SortGraph, is_kind
from .substitution import IDENTITY, Substitution, apply, compose, restrict
from .terms import App, Term, Var, ordered_variables, positions, term_at, term_key, variables
from .theory import Condition, Equation, RewriteTheory, Rule

__all__ = [
    "App",
    "Condition",
    "Equation",
    "FreshSupply",
    "IDENTITY",
    "OpDecl",
    "RewriteTheory",
    "Rule",
    "Signature",
    "SortGraph",
    "Substitution",
    "Symbol",
    "Term",
    "Var",
    "apply",
    "b_canonical",
    "b_equal",
    "collection",
    "compose",
    "fresh_rename",
    "is_kind",
    "make",
    "make_from_multiset",
    "ordered_variables",
    "positions",
    "renaming",
    "replace_at",
    "restrict",
    "term_at",
    "term_key",
    "tuple_symbol",
    "variables",
]
