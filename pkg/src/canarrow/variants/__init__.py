from .narrowing import DEFAULT_DEPTH_CAP, Variant, VariantSet, variants
from .normalize import (
    Normalizer,
    is_irreducible,
    normalize,
    normalize_substitution,
    normalizer_for,
)
from .unification import asym_variant_unify, variant_subsumes, variant_unify

__all__ = [
    "DEFAULT_DEPTH_CAP",
    "Normalizer",
    "Variant",
    "VariantSet",
    "asym_variant_unify",
    "is_irreducible",
    "normalize",
    "normalize_substitution",
    "normalizer_for",
    "variant_subsumes",
    "variant_unify",
    "variants",
]
