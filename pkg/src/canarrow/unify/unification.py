"""Order-sorted unification modulo the axioms of the signature.

Equations are first solved at the kind level; each solved form is then specialized by lowering
the sorts of its free variables until every binding is well sorted.
"""

import itertools
import logging
from collections import Counter
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field

from canarrow.errors import UnificationLimitError, UnsupportedFragmentError
from canarrow.kernel.canonical import collection, make_from_multiset
from canarrow.kernel.fresh import FreshSupply
from canarrow.kernel.signature import Signature, Symbol
from canarrow.kernel.substitution import Substitution, apply
from canarrow.kernel.terms import App, Term, Var, ordered_variables
from canarrow.unify.diophantine import minimal_solutions
from canarrow.unify.subsumption import minimize as minimize_unifiers

logger = logging.getLogger(__name__)

DEFAULT_MAX_UNIFIERS = 10_000
_MAX_SORT_COMBINATIONS = 4096

Equation = tuple[Term, Term]
Solved = dict[Var, Term]


@dataclass
class UnifierSet:
    """Unifiers of one problem; ``complete`` is False when a depth cap cut the computation."""

    unifiers: list[Substitution] = field(default_factory=list)
    complete: bool = True

    def __iter__(self) -> Iterator[Substitution]:
        return iter(self.unifiers)

    def __len__(self) -> int:
        return len(self.unifiers)

    def __getitem__(self, i: int) -> Substitution:
        return self.unifiers[i]


class _Solver:
    def __init__(self, sig: Signature, supply: FreshSupply, max_unifiers: int):
        self.sig = sig
        self.supply = supply
        self.max_unifiers = max_unifiers
        self.branches = 0

    # helpers

    def _kind(self, t: Term) -> str:
        return self.sig.kind_of(self.sig.least_sort(t))

    def _tick(self) -> None:
        self.branches += 1
        if self.branches > self.max_unifiers:
            raise UnificationLimitError(
                f"more than {self.max_unifiers} unification branches"
            )

    def _absorbs(self, x: Var) -> bool:
        """True iff ``x`` may hold any collection of its kind."""
        if x.sort.startswith("["):
            return True
        return self.sig.sorts.top_of(x.sort) == x.sort

    # solving

    def solve(self, eqs: list[Equation], theta: Solved) -> Iterator[Solved]:
        if not eqs:
            yield theta
            return
        (t, u), rest = eqs[0], eqs[1:]
        t, u = apply(t, theta), apply(u, theta)
        if t == u:
            yield from self.solve(rest, theta)
        elif isinstance(t, Var):
            yield from self._var(t, u, rest, theta)
        elif isinstance(u, Var):
            yield from self._var(u, t, rest, theta)
        elif t.op == u.op:
            op = t.op
            if op.assoc:
                yield from self._collection(op, list(t.args), list(u.args), rest, theta)
            elif op.comm:
                yield from self.solve(
                    [(t.args[0], u.args[0]), (t.args[1], u.args[1])] + rest, theta
                )
                if u.args[0] != u.args[1]:
                    yield from self.solve(
                        [(t.args[0], u.args[1]), (t.args[1], u.args[0])] + rest, theta
                    )
            elif len(t.args) == len(u.args):
                yield from self.solve(list(zip(t.args, u.args, strict=True)) + rest, theta)
        elif t.op.identity is not None and self._kind(u) == t.op.kind:
            yield from self._collection(t.op, list(t.args), collection(t.op, u), rest, theta)
        elif u.op.identity is not None and self._kind(t) == u.op.kind:
            yield from self._collection(u.op, collection(u.op, t), list(u.args), rest, theta)

    def _var(self, x: Var, t: Term, rest: list[Equation], theta: Solved) -> Iterator[Solved]:
        if self.sig.kind_of(x.sort) != self._kind(t):
            return
        if isinstance(t, App):
            op = t.op
            if x in t.vars:
                if op.assoc and x in t.args:
                    yield from self._collection(op, [x], list(t.args), rest, theta)
                return
            if op.identity is not None and not self._absorbs(x):
                yield from self._collapse(op, x, list(t.args), rest, theta)
                return
        yield from self._bind(x, t, rest, theta)

    def _collapse(
        self, op: Symbol, x: Var, members: list[Term], rest: list[Equation], theta: Solved
    ) -> Iterator[Solved]:
        """Bind ``x`` to the collection of ``members`` once per subset of members sent to the unit.

        Only variables that may hold the identity collapse; sort specialization handles the rest.
        """
        unit = op.identity
        unit_sort = self.sig.least_sort(unit)
        cands = [
            v
            for v in dict.fromkeys(members)
            if isinstance(v, Var) and v != x and self.sig.leq(unit_sort, v.sort)
        ]
        for size in range(len(cands) + 1):
            for dropped in itertools.combinations(cands, size):
                self._tick()
                gone = set(dropped)
                value = make_from_multiset(op, [m for m in members if m not in gone])
                if x in value.vars:
                    continue
                sub = {v: unit for v in dropped}
                new = {v: apply(s, sub) for v, s in theta.items()}
                new.update(sub)
                yield from self._bind(x, value, rest, new)

    def _bind(self, x: Var, t: Term, rest: list[Equation], theta: Solved) -> Iterator[Solved]:
        sub = {x: t}
        new = {v: apply(s, sub) for v, s in theta.items()}
        new[x] = t
        yield from self.solve(rest, new)

    def _collection(
        self, op: Symbol, left: list[Term], right: list[Term], rest: list[Equation], theta: Solved
    ) -> Iterator[Solved]:
        if op.comm:
            yield from self._ac(op, left, right, rest, theta)
        else:
            yield from self._assoc(op, left, right, rest, theta)

    def _to_identity(
        self, op: Symbol, side: list[Term], rest: list[Equation], theta: Solved
    ) -> Iterator[Solved]:
        if op.identity is None or not all(isinstance(t, Var) for t in side):
            return
        yield from self.solve([(v, op.identity) for v in side] + rest, theta)

    def _single(
        self, op: Symbol, x: Term, other: list[Term], rest: list[Equation], theta: Solved
    ) -> Iterator[Solved] | None:
        """Direct binding when one side is a lone variable."""
        if not isinstance(x, Var):
            return None
        value = make_from_multiset(op, other)
        if x in value.vars:
            return iter(())
        if op.identity is not None and not self._absorbs(x):
            return self._collapse(op, x, other, rest, theta)
        return self._bind(x, value, rest, theta)

    # assoc-comm

    def _ac(
        self, op: Symbol, left: list[Term], right: list[Term], rest: list[Equation], theta: Solved
    ) -> Iterator[Solved]:
        lc, rc = Counter(left), Counter(right)
        common = lc & rc
        lc, rc = lc - common, rc - common
        left = sorted(lc.elements(), key=lambda t: t.key)
        right = sorted(rc.elements(), key=lambda t: t.key)
        if not left and not right:
            yield from self.solve(rest, theta)
            return
        if not left or not right:
            yield from self._to_identity(op, left or right, rest, theta)
            return
        if len(left) == 1:
            direct = self._single(op, left[0], right, rest, theta)
            if direct is not None:
                yield from direct
                return
        if len(right) == 1:
            direct = self._single(op, right[0], left, rest, theta)
            if direct is not None:
                yield from direct
                return
        yield from self._ac_general(op, lc, rc, rest, theta)

    def _compatible(self, terms: list[Term]) -> bool:
        ops = {t.op for t in terms if isinstance(t, App)}
        return len(ops) <= 1

    def _ac_general(
        self, op: Symbol, lc: Counter, rc: Counter, rest: list[Equation], theta: Solved
    ) -> Iterator[Solved]:
        lel = sorted(lc, key=lambda t: t.key)
        rel = sorted(rc, key=lambda t: t.key)
        la, ra = [lc[e] for e in lel], [rc[e] for e in rel]
        lb = [1 if isinstance(e, App) else max(ra) for e in lel]
        rb = [1 if isinstance(e, App) else max(la) for e in rel]
        positions = lel + rel
        nonvar = [i for i, t in enumerate(positions) if isinstance(t, App)]
        basis = [
            row
            for row in minimal_solutions(la, ra, lb, rb).tolist()
            if self._compatible([positions[i] for i in nonvar if row[i]])
        ]
        if not basis:
            return
        last_cover = {
            i: max((k for k, row in enumerate(basis) if row[i]), default=-1) for i in nonvar
        }
        if any(v < 0 for v in last_cover.values()):
            return
        width = len(positions)
        has_identity = op.identity is not None

        def subsets(k: int, chosen: list[int], cover: list[int]) -> Iterator[list[int]]:
            if k == len(basis):
                if any(cover[i] != 1 for i in nonvar):
                    return
                if not has_identity and any(c == 0 for c in cover):
                    return
                yield list(chosen)
                return
            row = basis[k]
            # exclude
            if all(cover[i] == 1 or last_cover[i] > k for i in nonvar):
                yield from subsets(k + 1, chosen, cover)
            # include
            if all(cover[i] + row[i] <= 1 for i in nonvar):
                chosen.append(k)
                yield from subsets(k + 1, chosen, [c + r for c, r in zip(cover, row, strict=True)])
                chosen.pop()

        for chosen in subsets(0, [], [0] * width):
            self._tick()
            contents: list[Term] = []
            extra: list[Equation] = []
            for k in chosen:
                row = basis[k]
                terms = [positions[i] for i in nonvar if row[i]]
                if terms:
                    contents.append(terms[0])
                    extra.extend((terms[0], t) for t in terms[1:])
                else:
                    contents.append(self.supply.next_var(op.kind))
            eqs: list[Equation] = []
            for i, pos in enumerate(positions):
                if isinstance(pos, App):
                    continue
                members = [
                    contents[n] for n, k in enumerate(chosen) for _ in range(basis[k][i])
                ]
                eqs.append((pos, make_from_multiset(op, members)))
            yield from self.solve(eqs + extra + rest, theta)

    # assoc

    def _assoc(
        self, op: Symbol, left: list[Term], right: list[Term], rest: list[Equation], theta: Solved
    ) -> Iterator[Solved]:
        while left and right and left[0] == right[0]:
            left, right = left[1:], right[1:]
        while left and right and left[-1] == right[-1]:
            left, right = left[:-1], right[:-1]
        if not left and not right:
            yield from self.solve(rest, theta)
            return
        if not left or not right:
            yield from self._to_identity(op, left or right, rest, theta)
            return
        lcap = [t for t in left if isinstance(t, Var) and self.sig.list_capable(t, op)]
        rcap = [t for t in right if isinstance(t, Var) and self.sig.list_capable(t, op)]
        if not lcap and not rcap:
            if len(left) == len(right):
                yield from self.solve(list(zip(left, right, strict=True)) + rest, theta)
            return
        if lcap and rcap:
            for x, other in ((left, right), (right, left)):
                if len(x) == 1:
                    direct = self._single(op, x[0], other, rest, theta)
                    if direct is not None:
                        yield from direct
                        return
            raise UnsupportedFragmentError(
                f"associative unification with list variables on both sides of '{op.name}'"
            )
        if rcap:
            left, right = right, left
        yield from self._sequence(op, left, right, rest, theta)

    def _sequence(
        self, op: Symbol, left: list[Term], right: list[Term], rest: list[Equation], theta: Solved
    ) -> Iterator[Solved]:
        min_len = 0 if op.identity is not None else 1
        capable = [isinstance(t, Var) and self.sig.list_capable(t, op) for t in left]
        needed_after = [0] * (len(left) + 1)
        for i in range(len(left) - 1, -1, -1):
            needed_after[i] = needed_after[i + 1] + (min_len if capable[i] else 1)

        def splits(i: int, j: int, eqs: list[Equation]) -> Iterator[list[Equation]]:
            if i == len(left):
                if j == len(right):
                    yield eqs
                return
            if capable[i]:
                for end in range(j + min_len, len(right) - needed_after[i + 1] + 1):
                    yield from splits(
                        i + 1, end, eqs + [(left[i], make_from_multiset(op, right[j:end]))]
                    )
            elif j < len(right):
                yield from splits(i + 1, j + 1, eqs + [(left[i], right[j])])

        for eqs in splits(0, 0, []):
            self._tick()
            yield from self.solve(eqs + rest, theta)

    # sorts

    def specialize(self, theta: Solved) -> Iterator[Solved]:
        sig = self.sig
        failing = [x for x, t in theta.items() if not sig.leq(sig.least_sort(t), x.sort)]
        if not failing:
            yield theta
            return
        cand: list[Var] = ordered_variables(*(theta[x] for x in failing))
        if not cand:
            return
        options = [sig.sorts.lower_sorts(v.sort) for v in cand]
        total = 1
        for o in options:
            total *= len(o)
        if total > _MAX_SORT_COMBINATIONS:
            raise UnificationLimitError(f"{total} sort assignments to explore")
        affected = [x for x, t in theta.items() if any(v in t.vars for v in cand)]
        valid: list[tuple[str, ...]] = []
        for combo in itertools.product(*options):
            lowered = {v: Var(v.name, s) for v, s in zip(cand, combo, strict=True) if s != v.sort}
            if all(
                sig.leq(sig.least_sort(apply(theta[x], lowered)), x.sort) for x in affected
            ):
                valid.append(combo)
        maximal = [
            c
            for c in valid
            if not any(
                d != c and all(sig.leq(a, b) for a, b in zip(c, d, strict=True)) for d in valid
            )
        ]
        for combo in maximal:
            rho = {
                v: self.supply.next_var(s)
                for v, s in zip(cand, combo, strict=True)
                if s != v.sort
            }
            out = {x: apply(t, rho) for x, t in theta.items()}
            out.update(rho)
            yield out


def away_from(
    sub: Solved, problem_vars: Sequence[Var], avoid: set[Var], supply: FreshSupply
) -> Substitution:
    """Restrict to ``problem_vars`` with no range variable among them or ``avoid``."""
    images = [sub.get(x, x) for x in problem_vars]
    blocked = avoid | set(problem_vars)
    clash = [v for v in ordered_variables(*images) if v in blocked]
    rho = {v: supply.next_var(v.sort) for v in clash}
    return Substitution(
        {x: apply(img, rho) for x, img in zip(problem_vars, images, strict=True)}
    )


def b_unify(
    signature: Signature,
    problem: Iterable[Equation],
    avoid: Iterable[Var] = (),
    max_unifiers: int = DEFAULT_MAX_UNIFIERS,
    minimize: bool = True,
) -> UnifierSet:
    """Complete set of B-unifiers of a system of equations, restricted to its variables.

    Args:
        signature: Signature providing sorts and equational attributes.
        problem: Equations ``(t, u)`` to solve simultaneously.
        avoid: Further variables the unifier ranges must not use.
        max_unifiers: Cap on explored branches; exceeding it raises
            :class:`~canarrow.errors.UnificationLimitError`.
        minimize: Drop unifiers that are instances of others.

    Returns:
        UnifierSet: The unifiers, each binding every problem variable.
    """
    eqs = list(problem)
    terms = [t for eq in eqs for t in eq]
    avoid = list(avoid)
    problem_vars = ordered_variables(*terms)
    supply = FreshSupply.above("#", terms + avoid)
    solver = _Solver(signature, supply, max_unifiers)
    avoid_set = set(avoid)
    found: dict[Substitution, None] = {}
    for theta in solver.solve(eqs, {}):
        for spec in solver.specialize(theta):
            found.setdefault(away_from(spec, problem_vars, avoid_set, supply), None)
    unifiers = list(found)
    if minimize and len(unifiers) > 1:
        unifiers = minimize_unifiers(signature, unifiers, problem_vars)
    logger.debug("%d unifiers after %d branches", len(unifiers), solver.branches)
    return UnifierSet(unifiers)


def unify(signature: Signature, t: Term, u: Term, **kwargs) -> UnifierSet:
    return b_unify(signature, [(t, u)], **kwargs)
