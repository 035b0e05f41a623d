"""Level-order narrowing search with irreducibility and constraint bookkeeping."""

import logging
import signal
import threading
import time
import warnings
from collections import deque
from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import dataclass, field, replace

from canarrow.errors import ResourceLimitError, SearchTimeoutError, SmtBackendError
from canarrow.kernel.fresh import FreshSupply, fresh_rename
from canarrow.kernel.substitution import IDENTITY, Substitution, apply
from canarrow.kernel.terms import Term, ordered_variables, variables
from canarrow.kernel.theory import RewriteTheory, Rule
from canarrow.search.node import SearchNode, SearchResult, SearchStats, SolutionRecord, accumulate
from canarrow.search.problem import Arrow, ReachabilityProblem, SearchOptions
from canarrow.smt.formula import conjoin, conjoin_all, substitute
from canarrow.smt.prelude import TRUE
from canarrow.smt.solver import BuiltinBackend, SmtBackend, check_sat
from canarrow.transform import strip_guards, transform_theory
from canarrow.unify.unification import UnifierSet
from canarrow.variants.normalize import normalizer_for
from canarrow.variants.unification import asym_variant_unify, variant_unify

logger = logging.getLogger(__name__)


@dataclass
class _Context:
    """Per-search state shared by the steps of one run."""

    theory: RewriteTheory
    rules: list[Rule]
    options: SearchOptions
    supply: FreshSupply
    backend: SmtBackend
    stats: SearchStats
    next_id: int = 0
    nodes: dict[int, SearchNode] = field(default_factory=dict)
    deadline: float | None = None

    def new_id(self) -> int:
        out = self.next_id
        self.next_id += 1
        self.stats.nodes_created += 1
        return out


def prepare_theory(
    theory: RewriteTheory, options: SearchOptions
) -> tuple[RewriteTheory, list[Rule]]:
    """Theory and the rules that take part in narrowing under ``options``.

    Constraint modes turn conditional rules into guarded ones first. Without constraints,
    conditional rules are left out of the search.
    """
    marked = any(r.narrowing for r in theory.rules)
    if options.smt != "off":
        theory = transform_theory(theory)
    rules = [r for r in theory.rules if options.include_nonexec or not r.nonexec]
    if marked:
        rules = [r for r in rules if r.narrowing]
    conditional = [r.label or "?" for r in rules if r.conditional]
    if conditional:
        warnings.warn(
            f"conditional rules {conditional} are ignored without an smt algorithm option",
            stacklevel=2,
        )
        rules = [r for r in rules if not r.conditional]
    return theory, rules


def _unify(
    ctx: _Context, term: Term, pattern: Term, irreducible: tuple[Term, ...], avoid
) -> UnifierSet:
    ctx.stats.unifier_calls += 1
    opts = ctx.options
    kwargs = {
        "avoid": avoid,
        "filter": opts.filter,
        "depth_cap": opts.variant_depth_cap,
        "max_unifiers": opts.max_unifiers,
    }
    if opts.canonical:
        result = asym_variant_unify(ctx.theory, term, pattern, irreducible, **kwargs)
    else:
        result = variant_unify(ctx.theory, term, pattern, **kwargs)
    if not result.complete:
        ctx.stats.complete = False
    return result


def _narrowing_step(ctx: _Context, node: SearchNode) -> list[SearchNode]:
    norm = normalizer_for(ctx.theory)
    parent_vars = ordered_variables(node.term, node.constraint, *node.irreducible)
    children = []
    for rule in ctx.rules:
        (lhs, rhs), _ = fresh_rename([rule.lhs, rule.rhs], ctx.supply)
        for alpha in _unify(ctx, node.term, lhs, node.irreducible, parent_vars):
            guards, payload = strip_guards(norm.normalize(apply(rhs, alpha)))
            constraint = conjoin(substitute(node.constraint, alpha), conjoin_all(guards))
            if ctx.options.canonical:
                irreducible = tuple(apply(p, alpha) for p in node.irreducible)
                irreducible += (norm.normalize(apply(lhs, alpha)),)
            else:
                irreducible = ()
            images = [apply(x, alpha) for x in parent_vars]
            renamed, _ = fresh_rename([payload, constraint, *irreducible, *images], ctx.supply)
            k = len(irreducible)
            term, constraint = renamed[0], renamed[1]
            step = Substitution(zip(parent_vars, renamed[2 + k :], strict=True))
            children.append(
                SearchNode(
                    id=ctx.new_id(),
                    parent=node.id,
                    rule=rule.label,
                    step=step,
                    term=term,
                    depth=node.depth + 1,
                    irreducible=tuple(renamed[2 : 2 + k]),
                    constraint=constraint,
                )
            )
            logger.debug("node %d -> %d by %s: %s", node.id, children[-1].id, rule.label, term)
    return children


def _verdict(ctx: _Context, phi: Term) -> str:
    if phi == TRUE:
        return "sat"
    result = check_sat(phi, ctx.backend)
    if result.verdict == "unknown" and ctx.options.unknown_policy == "error":
        raise SmtBackendError(f"constraint solver returned unknown for {phi}: {result.reason}")
    return result.verdict


def _evaluate(ctx: _Context, node: SearchNode) -> SearchNode:
    mode = ctx.options.smt
    if mode in ("off", "noCheck"):
        return replace(node, status="sat")
    if mode == "finalCheck":
        return replace(node, status="unchecked")
    return replace(node, status=_verdict(ctx, node.constraint))


def _is_normal_form(ctx: _Context, node: SearchNode, beta: Substitution) -> bool:
    norm = normalizer_for(ctx.theory)
    instance = SearchNode(
        id=-1,
        parent=None,
        rule=None,
        step=IDENTITY,
        term=norm.normalize(apply(node.term, beta)),
        depth=node.depth,
        irreducible=tuple(apply(p, beta) for p in node.irreducible),
        constraint=substitute(node.constraint, beta),
    )
    saved = (ctx.next_id, ctx.stats.nodes_created)
    children = _narrowing_step(ctx, instance)
    ctx.next_id, ctx.stats.nodes_created = saved
    return not children


def _solutions(
    ctx: _Context,
    problem: ReachabilityProblem,
    node: SearchNode,
    path: Substitution,
    first_id: int,
) -> list[SolutionRecord]:
    if not problem.arrow.admits(node.depth):
        return []
    norm = normalizer_for(ctx.theory)
    target = norm.normalize(apply(problem.target, path))
    avoid = variables(node.constraint, *node.irreducible, *path.values())
    keep = ordered_variables(problem.initial, problem.target)
    trace = tuple(_trace(ctx, node))
    out = []
    for beta in _unify(ctx, node.term, target, node.irreducible, avoid):
        if problem.arrow is Arrow.BANG and not _is_normal_form(ctx, node, beta):
            continue
        phi = substitute(node.constraint, beta)
        verdict = "sat"
        if phi != TRUE:
            if ctx.options.smt == "off" or ctx.options.smt == "noCheck":
                verdict = "conditional"
            elif ctx.options.smt == "finalCheck" or phi != node.constraint:
                answer = _verdict(ctx, phi)
                if answer == "unsat":
                    continue
                verdict = "sat" if answer == "sat" else "conditional"
            elif node.status != "sat":
                verdict = "conditional"
        images = {x: norm.normalize(apply(apply(x, path), beta)) for x in keep}
        out.append(
            SolutionRecord(
                id=first_id + len(out),
                node=node.id,
                depth=node.depth,
                substitution=Substitution(images),
                constraint=phi,
                verdict=verdict,
                trace=trace,
                term=norm.normalize(apply(node.term, beta)),
            )
        )
    return out


def _trace(ctx: _Context, node: SearchNode) -> list[str]:
    labels = []
    current: SearchNode | None = node
    while current is not None and current.parent is not None:
        labels.append(current.rule or "")
        current = ctx.nodes.get(current.parent)
    return labels[::-1]


def _root(problem: ReachabilityProblem, ctx: _Context) -> SearchNode:
    norm = normalizer_for(ctx.theory)
    irreducible: tuple[Term, ...] = ()
    if ctx.options.canonical:
        irreducible = tuple(norm.normalize(p) for p in problem.irreducible)
    elif problem.irreducible:
        logger.warning("irreducibility terms are ignored by standard narrowing")
    return SearchNode(
        id=ctx.new_id(),
        parent=None,
        rule=None,
        step=IDENTITY,
        term=norm.normalize(problem.initial),
        depth=0,
        irreducible=irreducible,
        constraint=problem.constraint,
    )


@contextmanager
def _time_budget(seconds: float | None) -> Iterator[None]:
    """Interrupt the enclosed block with :class:`SearchTimeoutError` after ``seconds``.

    Uses a real-time interval timer, available in the main thread on POSIX only; elsewhere the
    search loop checks its deadline between nodes.
    """
    if (
        seconds is None
        or not hasattr(signal, "setitimer")
        or threading.current_thread() is not threading.main_thread()
    ):
        yield
        return

    def _expire(signum, frame):
        raise SearchTimeoutError(f"time limit of {seconds}s exceeded")

    previous = signal.signal(signal.SIGALRM, _expire)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, previous)


def search(problem: ReachabilityProblem) -> SearchResult:
    """Solutions of a reachability problem, explored level by level.

    Nodes are processed in creation order. A node is checked against the target, then expanded
    unless the depth bound is reached; nodes whose constraint is unsatisfiable are neither.

    Raises:
        ResourceLimitError: A unification, variant or normalization cap or the time limit was
            exceeded; the partial :class:`SearchResult` is attached as ``err.partial``.
    """
    options = problem.options
    theory, rules = prepare_theory(problem.theory, options)
    stats = SearchStats()
    result = SearchResult(problem, stats=stats)
    supply = FreshSupply.above(
        "$", [problem.initial, problem.target, problem.constraint, *problem.irreducible]
    )
    backend = options.backend if options.backend is not None else BuiltinBackend()
    ctx = _Context(theory, rules, options, supply, backend, stats)
    ctx.nodes = result.nodes
    start = time.perf_counter()
    if options.time_limit is not None:
        ctx.deadline = start + options.time_limit
    try:
        with _time_budget(options.time_limit):
            _run(ctx, problem, result)
    except ResourceLimitError as err:
        stats.wall_time = time.perf_counter() - start
        logger.warning("search stopped by a resource cap: %s", err)
        err.partial = result
        raise
    stats.wall_time = time.perf_counter() - start
    logger.info(
        "%d solutions, %d nodes, %d pruned unsat in %.3fs",
        result.count,
        stats.nodes_created,
        stats.nodes_pruned_unsat,
        stats.wall_time,
    )
    return result


def _run(ctx: _Context, problem: ReachabilityProblem, result: SearchResult) -> None:
    stats = ctx.stats
    if ctx.options.smt != "off" and _verdict(ctx, problem.constraint) == "unsat":
        logger.info("initial constraint is unsatisfiable")
        return
    queue = deque([_root(problem, ctx)])
    level = 0
    while queue:
        if ctx.deadline is not None and time.perf_counter() > ctx.deadline:
            raise SearchTimeoutError(f"time limit of {ctx.options.time_limit}s exceeded")
        node = _evaluate(ctx, queue.popleft())
        if node.depth > level:
            stats.levels_completed = level + 1
            logger.info("level %d done, %d nodes queued", level, len(queue) + 1)
            level = node.depth
        result.nodes[node.id] = node
        if not node.alive:
            stats.nodes_pruned_unsat += 1
            logger.debug("node %d pruned: unsatisfiable constraint", node.id)
            continue
        path = accumulate(problem.initial, result.branch(node.id))
        found = _solutions(ctx, problem, node, path, result.count)
        if problem.max_solutions is not None:
            found = found[: problem.max_solutions - result.count]
        result.solutions.extend(found)
        if problem.max_solutions is not None and result.count >= problem.max_solutions:
            return
        if problem.max_depth is None or node.depth < problem.max_depth:
            stats.nodes_expanded += 1
            queue.extend(_narrowing_step(ctx, node))
    stats.levels_completed = level + 1


# public single-step entry points


def _context(problem: ReachabilityProblem) -> _Context:
    theory, rules = prepare_theory(problem.theory, problem.options)
    options = problem.options
    backend = options.backend if options.backend is not None else BuiltinBackend()
    supply = FreshSupply.above(
        "$", [problem.initial, problem.target, problem.constraint, *problem.irreducible]
    )
    ctx = _Context(theory, rules, options, supply, backend, SearchStats())
    return ctx


def root_node(problem: ReachabilityProblem) -> SearchNode:
    """The unevaluated root of the search tree of ``problem``."""
    ctx = _context(problem)
    return _root(problem, ctx)


def narrowing_step(problem: ReachabilityProblem, node: SearchNode) -> list[SearchNode]:
    """Children of ``node``: one per enabled rule and unifier of its left-hand side."""
    ctx = _context(problem)
    ctx.supply = FreshSupply.above("$", [node.term, node.constraint, *node.irreducible])
    ctx.next_id = node.id + 1
    return _narrowing_step(ctx, node)


def evaluate_node(problem: ReachabilityProblem, node: SearchNode) -> SearchNode:
    """``node`` with its constraint status set according to the smt mode."""
    return _evaluate(_context(problem), node)


def try_solutions(
    problem: ReachabilityProblem, node: SearchNode, path: Substitution | None = None
) -> list[SolutionRecord]:
    """Solutions found at ``node``; ``path`` is its accumulated substitution."""
    ctx = _context(problem)
    path = path if path is not None else Substitution({x: x for x in problem.initial.vars})
    ctx.nodes[node.id] = node
    return _solutions(ctx, problem, node, path, 0)


__all__ = [
    "evaluate_node",
    "narrowing_step",
    "prepare_theory",
    "root_node",
    "search",
    "try_solutions",
]
