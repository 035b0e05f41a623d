from collections.abc import Iterable, Sequence

from canarrow.kernel.fresh import FreshSupply
from canarrow.kernel.substitution import Substitution, apply, compose
from canarrow.kernel.terms import App, Term, Var, ordered_variables
from canarrow.kernel.theory import RewriteTheory
from canarrow.unify.matching import matches
from canarrow.unify.subsumption import as_tuple, distinct
from canarrow.unify.unification import DEFAULT_MAX_UNIFIERS, UnifierSet, away_from, b_unify
from canarrow.variants.narrowing import DEFAULT_DEPTH_CAP, variants
from canarrow.variants.normalize import normalizer_for


class _GeneralityOrder:
    """E,B-subsumption between normalized substitutions on a fixed variable list.

    ``sigma`` is more general than ``theta`` iff some variant of the tuple of images of
    ``sigma`` B-matches the tuple of images of ``theta``. Variants are computed once per
    substitution.
    """

    def __init__(
        self,
        theory: RewriteTheory,
        variables: Iterable[Var],
        depth_cap: int = DEFAULT_DEPTH_CAP,
        max_unifiers: int = DEFAULT_MAX_UNIFIERS,
    ):
        self.theory = theory
        self.xs = sorted(set(variables), key=lambda v: v.key)
        self.depth_cap = depth_cap
        self.max_unifiers = max_unifiers
        self._patterns: dict[Substitution, list[Term]] = {}

    def images(self, sigma: Substitution) -> App:
        return as_tuple([sigma.image(x) for x in self.xs])

    def _variant_terms(self, sigma: Substitution) -> list[Term]:
        cached = self._patterns.get(sigma)
        if cached is None:
            found = variants(
                self.theory,
                self.images(sigma),
                depth_cap=self.depth_cap,
                max_unifiers=self.max_unifiers,
            )
            cached = [v.term for v in found]
            self._patterns[sigma] = cached
        return cached

    def subsumes(self, sigma: Substitution, theta: Substitution) -> bool:
        sig = self.theory.signature
        specific = self.images(theta)
        if matches(sig, self.images(sigma), specific):
            return True
        if not self.theory.variant_equations:
            return False
        return any(matches(sig, p, specific) for p in self._variant_terms(sigma))

    def minimize(self, unifiers: Sequence[Substitution]) -> list[Substitution]:
        kept: list[Substitution] = []
        for sigma in unifiers:
            if any(self.subsumes(k, sigma) for k in kept):
                continue
            kept = [k for k in kept if not self.subsumes(sigma, k)]
            kept.append(sigma)
        return kept


def variant_subsumes(
    theory: RewriteTheory, sigma: Substitution, theta: Substitution, variables: Iterable[Var]
) -> bool:
    """``sigma`` is at least as general as ``theta`` on ``variables`` modulo equations and axioms.

    Both substitutions are expected to have normalized images.
    """
    return _GeneralityOrder(theory, variables).subsumes(sigma, theta)


def _unifiers(
    theory: RewriteTheory,
    t: Term,
    u: Term,
    avoid: set[Var],
    depth_cap: int,
    max_unifiers: int,
) -> tuple[list[Substitution], bool]:
    """Normalized unifiers built from the B-unifiers of every variant of ``(t, u)``."""
    sig = theory.signature
    norm = normalizer_for(theory)
    xs = ordered_variables(t, u)
    vs = variants(theory, as_tuple([t, u]), depth_cap=depth_cap, max_unifiers=max_unifiers)
    supply_terms: list[Term] = [t, u, *avoid]
    for v in vs:
        supply_terms.append(v.term)
        supply_terms.extend(v.substitution.values())
    supply = FreshSupply.above("#", supply_terms)

    found: dict[Substitution, None] = {}
    for v in vs:
        left, right = v.term.args
        blocked = avoid | v.term.vars | v.substitution.range_vars | set(xs)
        for sigma in b_unify(sig, [(left, right)], avoid=blocked, max_unifiers=max_unifiers):
            tau = compose(v.substitution, sigma)
            tau = {x: norm.normalize(tau.image(x)) for x in xs}
            found.setdefault(away_from(tau, xs, avoid, supply), None)
    return list(found), vs.complete


def _reduce(
    theory: RewriteTheory,
    unifiers: list[Substitution],
    xs: list[Var],
    filter: bool,
    depth_cap: int,
    max_unifiers: int,
) -> list[Substitution]:
    if len(unifiers) < 2:
        return unifiers
    if not filter:
        return distinct(theory.signature, unifiers, xs)
    return _GeneralityOrder(theory, xs, depth_cap, max_unifiers).minimize(unifiers)


def variant_unify(
    theory: RewriteTheory,
    t: Term,
    u: Term,
    avoid: Iterable[Var] = (),
    filter: bool = True,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    max_unifiers: int = DEFAULT_MAX_UNIFIERS,
) -> UnifierSet:
    """Unifiers of ``t`` and ``u`` modulo the variant equations and the axioms.

    Variants of the pair ``(t, u)`` are computed first; each variant whose two components are
    B-unifiable contributes the composed, normalized substitution; renamings of an earlier
    unifier are dropped.

    Args:
        theory: Theory providing signature and variant equations.
        t: Left term.
        u: Right term.
        avoid: Variables the unifier ranges must not use.
        filter: Drop unifiers that are instances of another one modulo the equations and
            axioms, leaving a minimal set. When off, every unifier found for some variant is
            kept.
        depth_cap: Depth cap of the variant computation.
        max_unifiers: Cap handed to every B-unification call.

    Returns:
        UnifierSet: Normalized unifiers over ``vars(t) | vars(u)``; incomplete when the
        variant computation hit its depth cap.
    """
    unifiers, complete = _unifiers(theory, t, u, set(avoid), depth_cap, max_unifiers)
    xs = ordered_variables(t, u)
    unifiers = _reduce(theory, unifiers, xs, filter, depth_cap, max_unifiers)
    return UnifierSet(unifiers, complete=complete)


def asym_variant_unify(
    theory: RewriteTheory,
    t: Term,
    u: Term,
    irreducible: Iterable[Term],
    avoid: Iterable[Var] = (),
    filter: bool = True,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    max_unifiers: int = DEFAULT_MAX_UNIFIERS,
) -> UnifierSet:
    """Variant unifiers of ``t`` and ``u`` that keep every term of ``irreducible`` irreducible.

    The irreducibility check runs before any subsumption pass, so a general unifier that breaks
    the constraint never hides an instance that keeps it.
    """
    norm = normalizer_for(theory)
    irreducible = list(irreducible)
    unifiers, complete = _unifiers(theory, t, u, set(avoid), depth_cap, max_unifiers)
    kept = [
        sigma
        for sigma in unifiers
        if all(norm.is_irreducible(apply(p, sigma)) for p in irreducible)
    ]
    kept = _reduce(theory, kept, ordered_variables(t, u), filter, depth_cap, max_unifiers)
    return UnifierSet(kept, complete=complete)
