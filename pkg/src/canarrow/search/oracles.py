"""Ground rewriting oracles used to validate narrowing results.

Variables of a symbolic term are frozen into skolem constants, so rewriting modulo the
equations becomes variant unification against a ground subject.
"""

import logging
from collections.abc import Iterable

from canarrow.errors import StateLimitError
from canarrow.kernel.canonical import make
from canarrow.kernel.fresh import FreshSupply, fresh_rename
from canarrow.kernel.signature import OpDecl, Symbol
from canarrow.kernel.substitution import apply
from canarrow.kernel.terms import App, Term, Var
from canarrow.kernel.theory import RewriteTheory, Rule
from canarrow.search.engine import prepare_theory
from canarrow.search.node import SearchResult, SolutionRecord
from canarrow.search.problem import SearchOptions
from canarrow.smt.formula import conjoin, conjoin_all
from canarrow.smt.prelude import FALSE, TRUE
from canarrow.smt.solver import check_sat
from canarrow.transform import strip_guards
from canarrow.unify.subsumption import as_tuple, instance_of
from canarrow.variants.normalize import normalizer_for
from canarrow.variants.unification import variant_unify

logger = logging.getLogger(__name__)

DEFAULT_MAX_STATES = 100_000


def skolemize(theory: RewriteTheory, term: Term) -> tuple[Term, dict[Symbol, Var]]:
    """Replace every variable by a fresh constant of its sort; returns the inverse map."""
    sig = theory.signature
    rho = {}
    back: dict[Symbol, Var] = {}
    for v in sorted(term.vars, key=lambda v: v.key):
        sym = Symbol(
            f"!{v.name}", 0, sig.kind_of(v.sort), (OpDecl((), v.sort),), skolem=True
        )
        rho[v] = App(sym)
        back[sym] = v
    return apply(term, rho), back


def unskolemize(term: Term, back: dict[Symbol, Var]) -> Term:
    if isinstance(term, Var):
        return term
    if term.op.skolem and term.op in back:
        return back[term.op]
    if not term.args:
        return term
    return make(term.op, [unskolemize(a, back) for a in term.args])


def rewrite_steps(
    theory: RewriteTheory, rule: Rule, subject: Term
) -> list[tuple[Term, Term]]:
    """``(guard, successor)`` for every way ``rule`` rewrites the ground ``subject``."""
    norm = normalizer_for(theory)
    (lhs, rhs), _ = fresh_rename([rule.lhs, rule.rhs], FreshSupply.above("$", [subject]))
    out = []
    for theta in variant_unify(theory, lhs, subject):
        guards, payload = strip_guards(norm.normalize(apply(rhs, theta)))
        out.append((conjoin_all(guards), payload))
    return list(dict.fromkeys(out))


def _rule(theory: RewriteTheory, label: str) -> Rule | None:
    return next((r for r in theory.rules if r.label == label), None)


def replay(
    theory: RewriteTheory,
    initial: Term,
    target: Term,
    solution: SolutionRecord,
    options: SearchOptions | None = None,
) -> bool:
    """Re-derive ``solution`` by rewriting its instantiated initial term along its trace.

    Succeeds when some sequence of rewrites labelled like the trace reaches a term equal to
    the instantiated target, and the conjunction of the solution constraint with the guards
    met on the way is not unsatisfiable.
    """
    options = options if options is not None else SearchOptions(smt="noCheck")
    theory, _ = prepare_theory(theory, options)
    norm = normalizer_for(theory)
    sub = solution.substitution
    start = norm.normalize(apply(initial, sub))
    goal = norm.normalize(apply(target, sub))
    ground, back = skolemize(theory, as_tuple([start, goal]))
    ground_start, ground_goal = ground.args
    if solution.constraint == FALSE:
        return False

    def walk(term: Term, labels: tuple[str, ...], phi: Term) -> bool:
        if not labels:
            if term != ground_goal:
                return False
            full = conjoin(solution.constraint, unskolemize(phi, back))
            return full == TRUE or check_sat(full, options.backend).verdict != "unsat"
        rule = _rule(theory, labels[0])
        if rule is None:
            return False
        return any(
            walk(nxt, labels[1:], conjoin(phi, guard))
            for guard, nxt in rewrite_steps(theory, rule, term)
        )

    ok = walk(ground_start, solution.trace, TRUE)
    if not ok:
        logger.warning("solution %d does not replay along %s", solution.id, solution.trace)
    return ok


def ground_search(
    theory: RewriteTheory,
    term: Term,
    depth: int,
    options: SearchOptions | None = None,
    max_states: int = DEFAULT_MAX_STATES,
) -> set[Term]:
    """Terms reachable from the ground ``term`` in exactly ``depth`` rewrite steps.

    Raises:
        StateLimitError: More than ``max_states`` distinct states were generated; the states
            found so far are attached as ``err.partial``.
    """
    if not term.is_ground:
        raise ValueError(f"ground search needs a ground term, got {term}")
    options = options if options is not None else SearchOptions()
    theory, rules = prepare_theory(theory, options)
    norm = normalizer_for(theory)
    frontier = {norm.normalize(term)}
    seen = set(frontier)
    for level in range(depth):
        nxt: set[Term] = set()
        for state in sorted(frontier, key=lambda t: t.key):
            for rule in rules:
                for guard, succ in rewrite_steps(theory, rule, state):
                    if not succ.is_ground:
                        logger.debug("rule %s introduces variables, successor skipped", rule.label)
                        continue
                    if guard != TRUE and check_sat(guard).verdict == "unsat":
                        continue
                    nxt.add(succ)
        seen |= nxt
        if len(seen) > max_states:
            raise StateLimitError(f"ground search exceeded {max_states} states", partial=seen)
        logger.debug("ground level %d: %d states", level + 1, len(nxt))
        frontier = nxt
    return frontier


def covers(
    theory: RewriteTheory,
    result: SearchResult,
    ground_initial: Term,
    reached: Iterable[Term],
) -> list[Term]:
    """Reached ground states not covered by any solution of ``result``; empty when complete.

    A solution covers ``v`` when the pair of its instantiated initial and target terms is
    more general than ``(ground_initial, v)`` modulo the axioms.
    """
    sig = theory.signature
    norm = normalizer_for(theory)
    problem = result.problem
    pairs = [
        [
            norm.normalize(apply(problem.initial, s.substitution)),
            norm.normalize(apply(problem.target, s.substitution)),
        ]
        for s in result.solutions
    ]
    g = norm.normalize(ground_initial)
    return [
        v
        for v in sorted(reached, key=lambda t: t.key)
        if not any(instance_of(sig, pair, [g, v]) for pair in pairs)
    ]
