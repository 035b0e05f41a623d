from collections.abc import Iterable, Iterator, Mapping

from canarrow.kernel.canonical import make
from canarrow.kernel.terms import Term, Var


class Substitution(Mapping[Var, Term]):
    """Finite, immutable map from variables to terms; identity bindings are dropped."""

    __slots__ = ("_map", "_hash")

    def __init__(self, bindings: Mapping[Var, Term] | Iterable[tuple[Var, Term]] = ()):
        items = bindings.items() if isinstance(bindings, Mapping) else bindings
        self._map: dict[Var, Term] = {x: t for x, t in items if x != t}
        self._hash: int | None = None

    def __getitem__(self, var: Var) -> Term:
        return self._map[var]

    def __iter__(self) -> Iterator[Var]:
        return iter(self._map)

    def __len__(self) -> int:
        return len(self._map)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._map.items()))
        return self._hash

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Substitution):
            return self._map == other._map
        return NotImplemented

    def __repr__(self) -> str:
        inner = ", ".join(f"{x!r} |-> {t!r}" for x, t in sorted(self._map.items()))
        return "{" + inner + "}"

    @property
    def domain(self) -> frozenset[Var]:
        return frozenset(self._map)

    @property
    def range_vars(self) -> frozenset[Var]:
        out: frozenset[Var] = frozenset()
        for t in self._map.values():
            out = out | t.vars
        return out

    def image(self, var: Var) -> Term:
        return self._map.get(var, var)

    def apply(self, term: Term) -> Term:
        return apply(term, self)

    def compose(self, other: "Substitution") -> "Substitution":
        return compose(self, other)

    def restrict(self, variables: Iterable[Var]) -> "Substitution":
        return restrict(self, variables)

    def extended(self, var: Var, term: Term) -> "Substitution":
        out = dict(self._map)
        out[var] = term
        return Substitution(out)


IDENTITY = Substitution()


def apply(term: Term, sub: Mapping[Var, Term]) -> Term:
    """Homomorphic extension of ``sub`` to ``term``, returned in canonical form."""
    if not sub:
        return term
    if isinstance(term, Var):
        return sub.get(term, term)
    if term.is_ground:
        return term
    if len(sub) < 8 and not any(x in term.vars for x in sub):
        return term
    args = [apply(a, sub) for a in term.args]
    if all(a is b for a, b in zip(args, term.args, strict=True)):
        return term
    return make(term.op, args)


def compose(first: Mapping[Var, Term], second: Mapping[Var, Term]) -> Substitution:
    """``first`` then ``second``: ``x |-> second(first(x))``."""
    out = {x: apply(t, second) for x, t in first.items()}
    for x, t in second.items():
        if x not in out:
            out[x] = t
    return Substitution(out)


def restrict(sub: Mapping[Var, Term], variables: Iterable[Var]) -> Substitution:
    keep = set(variables)
    return Substitution({x: t for x, t in sub.items() if x in keep})


def is_idempotent(sub: Mapping[Var, Term]) -> bool:
    dom = set(sub)
    return not any(dom & t.vars for t in sub.values())
