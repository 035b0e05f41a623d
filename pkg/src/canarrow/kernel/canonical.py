"""B-canonical construction of terms.

Every :class:`~canarrow.kernel.terms.App` in the system is built by :func:`make`, so two terms are
equal modulo the axioms exactly when they are structurally equal.
"""

from collections.abc import Sequence

from canarrow.kernel.signature import Symbol
from canarrow.kernel.terms import App, Path, Term, Var


def make(op: Symbol, args: Sequence[Term] = ()) -> Term:
    """Build ``op(args)`` from canonical arguments and return its canonical form."""
    if op.assoc:
        flat: list[Term] = []
        for a in args:
            if isinstance(a, App) and a.op == op:
                flat.extend(a.args)
            else:
                flat.append(a)
        if op.identity is not None:
            flat = [a for a in flat if a != op.identity]
            if not flat:
                return op.identity
        if len(flat) == 1:
            return flat[0]
    else:
        flat = list(args)
    if op.comm:
        flat.sort(key=lambda t: t.key)
    return App(op, tuple(flat))


def make_from_multiset(op: Symbol, elements: Sequence[Term]) -> Term:
    """Canonical ``op`` term from a (possibly empty or singleton) collection of elements."""
    if not elements:
        if op.identity is None:
            raise ValueError(f"empty argument list for '{op.name}' without identity")
        return op.identity
    if len(elements) == 1:
        return elements[0]
    return make(op, elements)


def b_canonical(term: Term) -> Term:
    """Rebuild ``term`` bottom-up through :func:`make`."""
    if isinstance(term, Var):
        return term
    return make(term.op, [b_canonical(a) for a in term.args])


def b_equal(t: Term, u: Term) -> bool:
    return b_canonical(t) == b_canonical(u)


def collection(op: Symbol, term: Term) -> list[Term]:
    """Elements of ``term`` viewed as an ``op`` collection (empty for the identity)."""
    if isinstance(term, App) and term.op == op:
        return list(term.args)
    if op.identity is not None and term == op.identity:
        return []
    return [term]


def replace_at(term: Term, path: Path, new: Term) -> Term:
    if not path:
        return new
    assert isinstance(term, App)
    i = path[0]
    args = list(term.args)
    args[i] = replace_at(args[i], path[1:], new)
    return make(term.op, args)
