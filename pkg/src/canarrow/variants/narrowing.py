"""Folding variant narrowing: the most general variants of a term."""

import logging
from collections.abc import Iterator
from dataclasses import dataclass, field

from canarrow.kernel.canonical import replace_at
from canarrow.kernel.fresh import FreshSupply, renaming
from canarrow.kernel.signature import TUPLE_KIND
from canarrow.kernel.substitution import IDENTITY, Substitution, apply, compose
from canarrow.kernel.terms import Term, Var, ordered_variables, positions
from canarrow.kernel.theory import RewriteTheory
from canarrow.unify.subsumption import instance_of
from canarrow.unify.unification import DEFAULT_MAX_UNIFIERS, b_unify
from canarrow.variants.normalize import normalizer_for

logger = logging.getLogger(__name__)

DEFAULT_DEPTH_CAP = 32


@dataclass(frozen=True)
class Variant:
    """Pair ``(term, substitution)`` with ``term`` the normal form of the input instance."""

    term: Term
    substitution: Substitution


@dataclass
class VariantSet:
    variants: list[Variant] = field(default_factory=list)
    complete: bool = True

    def __iter__(self) -> Iterator[Variant]:
        return iter(self.variants)

    def __len__(self) -> int:
        return len(self.variants)


def _more_general(theory: RewriteTheory, w: Variant, v: Variant, xs: list[Var]) -> bool:
    return instance_of(
        theory.signature,
        [w.term] + [w.substitution.image(x) for x in xs],
        [v.term] + [v.substitution.image(x) for x in xs],
    )


def variants(
    theory: RewriteTheory,
    term: Term,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    max_unifiers: int = DEFAULT_MAX_UNIFIERS,
) -> VariantSet:
    """Most general variants of ``term`` modulo the variant equations.

    Narrowing steps with the equations are applied breadth first at non-variable positions;
    a new variant is discarded when an existing one is at least as general, and existing ones
    are dropped when the new variant is more general. The result is marked incomplete when
    ``depth_cap`` levels did not exhaust the frontier.
    """
    norm = normalizer_for(theory)
    sig = theory.signature
    xs = ordered_variables(term)
    equations = theory.variant_equations
    supply = FreshSupply.above("%", [term])

    root = Variant(norm.normalize(term), IDENTITY)
    found: list[Variant] = [root]
    frontier = [root]
    depth = 0
    while frontier and depth < depth_cap:
        nxt: list[Variant] = []
        for v in frontier:
            if v not in found:
                continue
            avoid = v.term.vars | v.substitution.range_vars | set(xs)
            for path, sub in positions(v.term):
                if sub.op.kind == TUPLE_KIND:
                    continue
                for eq in equations:
                    if eq.lhs.op.kind != sub.op.kind:
                        continue
                    rho = renaming(ordered_variables(eq.lhs, eq.rhs), supply)
                    lhs, rhs = apply(eq.lhs, rho), apply(eq.rhs, rho)
                    for sigma in b_unify(
                        sig, [(sub, lhs)], avoid=avoid, max_unifiers=max_unifiers
                    ):
                        new_term = norm.normalize(apply(replace_at(v.term, path, rhs), sigma))
                        theta = compose(v.substitution, sigma).restrict(xs)
                        theta = Substitution({x: norm.normalize(t) for x, t in theta.items()})
                        cand = Variant(new_term, theta)
                        if any(_more_general(theory, w, cand, xs) for w in found):
                            continue
                        found = [w for w in found if not _more_general(theory, cand, w, xs)]
                        found.append(cand)
                        nxt.append(cand)
        frontier = nxt
        depth += 1
    complete = not frontier
    if not complete:
        logger.warning("variant computation stopped at depth cap %d", depth_cap)
    return VariantSet(found, complete)
