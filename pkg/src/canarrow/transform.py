"""Turn conditional rules with constraint conditions into guarded unconditional rules.

``crl L => R if phi = true`` becomes ``rl L => phi >> R``: the guard symbol ``_>>_`` wraps
the right-hand side and the search peels it off after every step.
"""

from dataclasses import replace

from canarrow.errors import StructuralError, UnsupportedConditionError
from canarrow.kernel.canonical import make
from canarrow.kernel.signature import Symbol
from canarrow.kernel.terms import App, Term
from canarrow.kernel.theory import RewriteTheory, Rule
from canarrow.smt.formula import conjoin_all
from canarrow.smt.prelude import BOOLEAN, BOOLEAN_KIND, TRUE, install_boolean

GUARD = "_>>_"
GUARD_PREC = 65


def is_guard(term: Term) -> bool:
    return isinstance(term, App) and term.op.name == GUARD and term.op.arity == 2


def guard_symbol(theory: RewriteTheory) -> Symbol:
    kind = theory.state_kind
    if kind is None:
        raise StructuralError(f"theory '{theory.name}' has no state kind to guard")
    return theory.signature.symbol(GUARD, 2, kind)


def _condition_formula(theory: RewriteTheory, rule: Rule) -> Term:
    formulas = []
    for cond in rule.conditions:
        lhs_kind = theory.kind_of(theory.least_sort(cond.lhs))
        if cond.kind != "eq" or cond.rhs != TRUE or lhs_kind != BOOLEAN_KIND:
            raise UnsupportedConditionError(
                f"rule {rule.label or ''}: only conditions 'phi = true' over Boolean are supported"
            )
        formulas.append(cond.lhs)
    return conjoin_all(formulas)


def transform_theory(theory: RewriteTheory) -> RewriteTheory:
    """Copy of ``theory`` whose conditional rules are guarded unconditional rules.

    Every transformed rule carries the ``narrowing`` attribute. Applying the transformation to
    its own output changes nothing.
    """
    if not any(r.conditional for r in theory.rules):
        return theory
    sig = theory.signature.copy()
    install_boolean(sig)
    kind = theory.state_kind
    if kind is None:
        raise StructuralError(f"theory '{theory.name}' has rules but no state kind")
    for sort in sig.sorts.component(kind):
        sig.add_op(GUARD, (BOOLEAN, sort), sort, prec=GUARD_PREC, gather=("e", "E"))
    sig.validate()
    guard = sig.symbol(GUARD, 2, kind)
    out = replace(theory, signature=sig, rules=[])
    for rule in theory.rules:
        if not rule.conditional:
            out.rules.append(rule)
            continue
        phi = _condition_formula(theory, rule)
        out.rules.append(
            Rule(
                rule.lhs,
                make(guard, [phi, rule.rhs]),
                rule.label,
                (),
                rule.attrs | {"narrowing"},
            )
        )
    return out


def split_guard(term: Term) -> tuple[Term, Term]:
    """``(phi, payload)`` of ``phi >> payload``; ``(true, term)`` when ``term`` is unguarded."""
    if isinstance(term, App) and term.op.name == GUARD:
        if len(term.args) != 2:
            raise StructuralError(f"guard with {len(term.args)} arguments")
        return term.args[0], term.args[1]
    return TRUE, term


def strip_guards(term: Term) -> tuple[list[Term], Term]:
    """Peel every outer guard, innermost last."""
    guards = []
    while is_guard(term):
        phi, term = split_guard(term)
        guards.append(phi)
    return guards, term
