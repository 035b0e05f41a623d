"""Matching modulo free, comm, assoc, assoc-comm and identity axioms."""

from collections import Counter
from collections.abc import Iterator

from canarrow.kernel.canonical import collection, make_from_multiset
from canarrow.kernel.signature import Signature, Symbol
from canarrow.kernel.substitution import Substitution
from canarrow.kernel.terms import App, Term, Var

Binding = dict[Var, Term]


def b_match(signature: Signature, pattern: Term, subject: Term) -> list[Substitution]:
    """All B-matchers ``sigma`` with ``pattern sigma =B subject``, without duplicates.

    Variables of ``subject`` are treated as constants.
    """
    out: dict[Substitution, None] = {}
    for binding in _match(signature, [(pattern, subject)], {}):
        out.setdefault(Substitution(binding), None)
    return list(out)


def matches(signature: Signature, pattern: Term, subject: Term) -> bool:
    return next(_match(signature, [(pattern, subject)], {}), None) is not None


def first_match(signature: Signature, pattern: Term, subject: Term) -> Substitution | None:
    binding = next(_match(signature, [(pattern, subject)], {}), None)
    return None if binding is None else Substitution(binding)


def _match(sig: Signature, pairs: list[tuple[Term, Term]], binding: Binding) -> Iterator[Binding]:
    if not pairs:
        yield binding
        return
    (p, s), rest = pairs[0], pairs[1:]
    for b in _match_one(sig, p, s, binding):
        yield from _match(sig, rest, b)


def _bind(sig: Signature, var: Var, value: Term, binding: Binding) -> Iterator[Binding]:
    bound = binding.get(var)
    if bound is not None:
        if bound == value:
            yield binding
        return
    if sig.leq(sig.least_sort(value), var.sort):
        yield {**binding, var: value}


def _match_one(sig: Signature, p: Term, s: Term, binding: Binding) -> Iterator[Binding]:
    if isinstance(p, Var):
        yield from _bind(sig, p, s, binding)
        return
    if p.is_ground:
        if p == s:
            yield binding
        return
    op = p.op
    if isinstance(s, App) and s.op == op:
        sargs = list(s.args)
    elif op.identity is not None and sig.kind_of(sig.least_sort(s)) == op.kind:
        sargs = collection(op, s)
    else:
        return
    if op.assoc and op.comm:
        yield from _match_ac(sig, op, list(p.args), sargs, binding)
    elif op.assoc:
        yield from _match_assoc(sig, op, list(p.args), sargs, binding)
    elif len(p.args) != len(sargs):
        return
    elif op.comm:
        yield from _match(sig, list(zip(p.args, sargs, strict=True)), binding)
        if sargs[0] != sargs[1]:
            yield from _match(sig, [(p.args[0], sargs[1]), (p.args[1], sargs[0])], binding)
    else:
        yield from _match(sig, list(zip(p.args, sargs, strict=True)), binding)


def _match_ac(
    sig: Signature, op: Symbol, pargs: list[Term], sargs: list[Term], binding: Binding
) -> Iterator[Binding]:
    """Distribute the subject multiset over the pattern arguments."""
    apps = [a for a in pargs if isinstance(a, App)]
    pvars = Counter(a for a in pargs if isinstance(a, Var))
    yield from _ac_apps(sig, op, apps, pvars, Counter(sargs), binding)


def _ac_apps(
    sig: Signature,
    op: Symbol,
    apps: list[App],
    pvars: Counter,
    remaining: Counter,
    binding: Binding,
) -> Iterator[Binding]:
    if not apps:
        yield from _ac_vars(sig, op, pvars, remaining, binding)
        return
    head, tail = apps[0], apps[1:]
    for elem in list(remaining):
        if isinstance(elem, App) and elem.op != head.op and head.op.identity is None:
            continue
        rest = remaining.copy()
        rest[elem] -= 1
        if not rest[elem]:
            del rest[elem]
        for b in _match_one(sig, head, elem, binding):
            yield from _ac_apps(sig, op, tail, pvars, rest, b)


def _ac_vars(
    sig: Signature, op: Symbol, pvars: Counter, remaining: Counter, binding: Binding
) -> Iterator[Binding]:
    free: list[tuple[Var, int]] = []
    remaining = remaining.copy()
    for var, mult in pvars.items():
        bound = binding.get(var)
        if bound is None:
            free.append((var, mult))
            continue
        for elem in collection(op, bound):
            remaining[elem] -= mult
            if remaining[elem] < 0:
                return
            if not remaining[elem]:
                del remaining[elem]
    if not free:
        if not remaining:
            yield binding
        return
    elems = sorted(remaining, key=lambda t: t.key)
    counts = [remaining[e] for e in elems]
    for shares in _distribute(counts, [m for _, m in free], op.identity is not None):
        b = dict(binding)
        ok = True
        for (var, _), share in zip(free, shares, strict=True):
            members = [e for e, k in zip(elems, share, strict=True) for _ in range(k)]
            value = make_from_multiset(op, members)
            if not sig.leq(sig.least_sort(value), var.sort):
                ok = False
                break
            b[var] = value
        if ok:
            yield b


def _distribute(counts: list[int], mults: list[int], allow_empty: bool) -> Iterator[list[list[int]]]:
    """Ways to write each ``counts[e]`` as ``sum_v mults[v] * share[v][e]``."""
    n_vars = len(mults)
    shares = [[0] * len(counts) for _ in range(n_vars)]

    def rec(e: int) -> Iterator[list[list[int]]]:
        if e == len(counts):
            if allow_empty or all(any(row) for row in shares):
                yield [list(row) for row in shares]
            return
        yield from split(e, 0, counts[e])

    def split(e: int, v: int, left: int) -> Iterator[list[list[int]]]:
        if v == n_vars - 1:
            if left % mults[v] == 0:
                shares[v][e] = left // mults[v]
                yield from rec(e + 1)
                shares[v][e] = 0
            return
        for k in range(left // mults[v] + 1):
            shares[v][e] = k
            yield from split(e, v + 1, left - k * mults[v])
        shares[v][e] = 0

    yield from rec(0)


def _match_assoc(
    sig: Signature, op: Symbol, pargs: list[Term], sargs: list[Term], binding: Binding
) -> Iterator[Binding]:
    """Sequence matching for associative operators with or without identity."""
    min_len = 0 if op.identity is not None else 1

    def rec(i: int, j: int, b: Binding) -> Iterator[Binding]:
        if i == len(pargs):
            if j == len(sargs):
                yield b
            return
        p = pargs[i]
        if isinstance(p, Var):
            bound = b.get(p)
            if bound is not None:
                seq = collection(op, bound)
                if sargs[j : j + len(seq)] == seq:
                    yield from rec(i + 1, j + len(seq), b)
                return
            needed = (len(pargs) - i - 1) * min_len
            for end in range(j + min_len, len(sargs) - needed + 1):
                value = make_from_multiset(op, sargs[j:end])
                if sig.leq(sig.least_sort(value), p.sort):
                    yield from rec(i + 1, end, {**b, p: value})
            return
        if j >= len(sargs):
            return
        for b2 in _match_one(sig, p, sargs[j], b):
            yield from rec(i + 1, j + 1, b2)

    yield from rec(0, 0, binding)
