from collections.abc import Iterator
from typing import TYPE_CHECKING, Union

if TYPE_CHECKING:
    from canarrow.kernel.signature import Symbol

# user variables have no family; the others are reserved for generated variables
FRESH_FAMILIES = ("$", "#", "%", "@")


class Var:
    """A sorted variable. Variables named ``$3``, ``#12`` ... belong to a fresh family."""

    __slots__ = ("name", "sort", "family", "index", "key", "_hash")

    def __init__(self, name: str, sort: str):
        if not name:
            raise ValueError("variable name must not be empty")
        self.name = name
        self.sort = sort
        family = name[0] if name[0] in FRESH_FAMILIES else ""
        index = int(name[1:]) if family and name[1:].isdigit() else -1
        self.family = family
        self.index = index
        self.key = (0, family, index, name, sort)
        self._hash = hash(self.key)

    @property
    def vars(self) -> frozenset["Var"]:
        return frozenset((self,))

    @property
    def is_ground(self) -> bool:
        return False

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Var) and self.key == other.key

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Term") -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        return f"{self.name}:{self.sort}"

    def __str__(self) -> str:
        from canarrow.parsing.printer import print_term

        return print_term(self)


class App:
    """Application of a symbol to arguments.

    Instances are only built through :func:`canarrow.kernel.canonical.make`, which keeps them in
    B-canonical form (assoc arguments flattened, identities removed, comm arguments sorted).
    """

    __slots__ = ("op", "args", "key", "_hash", "_vars")

    def __init__(self, op: "Symbol", args: tuple["Term", ...] = ()):
        self.op = op
        self.args = tuple(args)
        self.key = (1, op.name, op.arity, op.kind, tuple(a.key for a in self.args))
        self._hash = hash((op.name, op.kind, tuple(a._hash for a in self.args)))
        self._vars: frozenset[Var] | None = None

    @property
    def vars(self) -> frozenset[Var]:
        if self._vars is None:
            if not self.args:
                self._vars = frozenset()
            elif len(self.args) == 1:
                self._vars = self.args[0].vars
            else:
                self._vars = frozenset().union(*(a.vars for a in self.args))
        return self._vars

    @property
    def is_ground(self) -> bool:
        return not self.vars

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return isinstance(other, App) and self._hash == other._hash and self.key == other.key

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Term") -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        if not self.args:
            return self.op.name
        return f"{self.op.name}({', '.join(repr(a) for a in self.args)})"

    def __str__(self) -> str:
        from canarrow.parsing.printer import print_term

        return print_term(self)


Term = Union[Var, App]
Path = tuple[int, ...]


def term_key(term: Term) -> tuple:
    """Total order on terms: variables before applications, then structurally."""
    return term.key


def variables(*terms: Term) -> frozenset[Var]:
    out: frozenset[Var] = frozenset()
    for t in terms:
        out = out | t.vars
    return out


def ordered_variables(*terms: Term) -> list[Var]:
    """Variables in order of first occurrence, left to right, depth first."""
    seen: dict[Var, None] = {}

    def walk(t: Term) -> None:
        if isinstance(t, Var):
            seen.setdefault(t, None)
        elif t.vars:
            for a in t.args:
                walk(a)

    for t in terms:
        walk(t)
    return list(seen)


def positions(term: Term, path: Path = ()) -> Iterator[tuple[Path, "App"]]:
    """Pre-order walk over the non-variable positions of ``term``."""
    if isinstance(term, App):
        yield path, term
        for i, a in enumerate(term.args):
            yield from positions(a, path + (i,))


def term_at(term: Term, path: Path) -> Term:
    for i in path:
        if not isinstance(term, App):
            raise IndexError(f"invalid position {path}")
        term = term.args[i]
    return term


def size(term: Term) -> int:
    if isinstance(term, Var):
        return 1
    return 1 + sum(size(a) for a in term.args)
