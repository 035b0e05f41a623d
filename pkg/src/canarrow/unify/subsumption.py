from collections.abc import Iterable, Sequence

from canarrow.kernel.signature import Signature, tuple_symbol
from canarrow.kernel.substitution import Substitution
from canarrow.kernel.terms import App, Term, Var
from canarrow.unify.matching import matches


def as_tuple(terms: Sequence[Term]) -> App:
    return App(tuple_symbol(len(terms)), tuple(terms))


def instance_of(signature: Signature, general: Sequence[Term], specific: Sequence[Term]) -> bool:
    """True iff ``specific`` is a B-instance of ``general``, componentwise with one matcher."""
    return matches(signature, as_tuple(general), as_tuple(specific))


def subsumes(
    signature: Signature, sigma: Substitution, theta: Substitution, variables: Iterable[Var]
) -> bool:
    """``sigma`` is at least as general as ``theta`` on ``variables``."""
    xs = sorted(set(variables), key=lambda v: v.key)
    return instance_of(
        signature, [sigma.image(x) for x in xs], [theta.image(x) for x in xs]
    )


def minimize(
    signature: Signature, unifiers: Iterable[Substitution], variables: Iterable[Var]
) -> list[Substitution]:
    """Keep the unifiers not subsumed by another one, preserving their order."""
    xs = sorted(set(variables), key=lambda v: v.key)
    kept: list[Substitution] = []
    for sigma in unifiers:
        if any(subsumes(signature, k, sigma, xs) for k in kept):
            continue
        kept = [k for k in kept if not subsumes(signature, sigma, k, xs)]
        kept.append(sigma)
    return kept


def distinct(
    signature: Signature, unifiers: Iterable[Substitution], variables: Iterable[Var]
) -> list[Substitution]:
    """Drop unifiers that are renamings of an earlier one, preserving their order."""
    xs = sorted(set(variables), key=lambda v: v.key)
    kept: list[Substitution] = []
    for sigma in unifiers:
        if not any(
            subsumes(signature, k, sigma, xs) and subsumes(signature, sigma, k, xs) for k in kept
        ):
            kept.append(sigma)
    return kept
