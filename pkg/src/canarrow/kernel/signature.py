from dataclasses import dataclass
from functools import lru_cache
from typing import Any

from canarrow.errors import SignatureError
from canarrow.kernel.sorts import SortGraph, is_kind
from canarrow.kernel.terms import App, Term, Var

TUPLE_KIND = "[Tuple]"


@dataclass(frozen=True)
class OpDecl:
    arg_sorts: tuple[str, ...]
    result_sort: str


def _template(name: str, arity: int) -> tuple[str | None, ...] | None:
    """Split a mixfix name into keywords and holes (``None``); ``None`` for prefix syntax."""
    if "_" not in name:
        return None
    elements: list[str | None] = []
    word = ""
    for ch in name:
        if ch in "_ ()[]{},":
            if word:
                elements.append(word)
                word = ""
            if ch == "_":
                elements.append(None)
            elif ch != " ":
                # special characters are always tokens of their own
                elements.append(ch)
        else:
            word += ch
    if word:
        elements.append(word)
    if elements.count(None) != arity:
        raise SignatureError(
            f"operator '{name}' has {elements.count(None)} argument places but arity {arity}"
        )
    return tuple(elements)


class Symbol:
    """An operator of a given name, arity and result kind, carrying its overloaded declarations."""

    __slots__ = (
        "name",
        "arity",
        "kind",
        "decls",
        "assoc",
        "comm",
        "identity",
        "identity_name",
        "ctor",
        "builtin",
        "value",
        "skolem",
        "template",
        "_prec",
        "_gather",
        "_hash",
    )

    def __init__(
        self,
        name: str,
        arity: int,
        kind: str,
        decls: tuple[OpDecl, ...] = (),
        *,
        assoc: bool = False,
        comm: bool = False,
        identity: App | None = None,
        identity_name: str | None = None,
        ctor: bool = False,
        prec: int | None = None,
        gather: tuple[str, ...] | None = None,
        builtin: str | None = None,
        value: Any = None,
        skolem: bool = False,
    ):
        self.name = name
        self.arity = arity
        self.kind = kind
        self.decls = list(decls)
        self.assoc = assoc
        self.comm = comm
        self.identity = identity
        self.identity_name = identity_name
        self.ctor = ctor
        self.builtin = builtin
        self.value = value
        self.skolem = skolem
        self.template = _template(name, arity) if builtin != "tuple" else None
        self._prec = prec
        self._gather = gather
        self._hash = hash((name, arity, kind))

    @property
    def has_identity(self) -> bool:
        return self.identity is not None or self.identity_name is not None

    @property
    def closed(self) -> bool:
        t = self.template
        return t is None or (t[0] is not None and t[-1] is not None)

    @property
    def prec(self) -> int:
        if self._prec is not None:
            return self._prec
        return 0 if self.closed else 41

    @prec.setter
    def prec(self, value: int | None) -> None:
        self._prec = value

    @property
    def gather(self) -> tuple[str, ...]:
        if self._gather is not None:
            return self._gather
        if self.template is None:
            return ("&",) * self.arity
        out = []
        last = len(self.template) - 1
        for i, el in enumerate(self.template):
            if el is None:
                out.append("E" if i in (0, last) else "&")
        return tuple(out)

    @gather.setter
    def gather(self, value: tuple[str, ...] | None) -> None:
        self._gather = value

    @property
    def arg_kinds(self) -> list[tuple[str, ...]]:
        """Distinct argument kind tuples over the declarations."""
        return list(dict.fromkeys(d.arg_sorts for d in self.decls))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return (
            isinstance(other, Symbol)
            and self.name == other.name
            and self.arity == other.arity
            and self.kind == other.kind
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Symbol({self.name!r}/{self.arity} -> {self.kind})"


@lru_cache(maxsize=None)
def tuple_symbol(n: int) -> Symbol:
    """Free n-ary symbol used to pair terms and substitution images."""
    return Symbol("<tuple>", n, TUPLE_KIND, builtin="tuple")


class Signature:
    """Sorts, subsorts and operator declarations of a theory."""

    def __init__(self, sorts: SortGraph | None = None):
        self.sorts = sorts if sorts is not None else SortGraph()
        self.symbols: dict[tuple[str, int, str], Symbol] = {}
        self._ls_cache: dict[Term, str] = {}
        self._result_cache: dict[tuple[Symbol, tuple[str, ...]], str] = {}

    # construction

    def add_sort(self, sort: str) -> None:
        self.sorts.add_sort(sort)
        self._clear()

    def add_subsort(self, lower: str, upper: str) -> None:
        self.sorts.add_subsort(lower, upper)
        self._clear()

    def _clear(self) -> None:
        self._ls_cache.clear()
        self._result_cache.clear()

    def add_op(
        self,
        name: str,
        arg_sorts: tuple[str, ...] | list[str],
        result_sort: str,
        *,
        assoc: bool = False,
        comm: bool = False,
        identity: str | App | None = None,
        ctor: bool = False,
        prec: int | None = None,
        gather: tuple[str, ...] | None = None,
        builtin: str | None = None,
        value: Any = None,
    ) -> Symbol:
        args = tuple(self.sorts.resolve(s) for s in arg_sorts)
        result = self.sorts.resolve(result_sort)
        kind = self.sorts.kind_of(result)
        arity = len(args)
        if (assoc or comm) and arity != 2:
            raise SignatureError(f"operator '{name}' has equational attributes but arity {arity}")
        if identity is not None and not assoc:
            raise SignatureError(f"operator '{name}' declares an identity without assoc")
        if assoc:
            for s in args:
                if self.sorts.kind_of(s) != kind:
                    raise SignatureError(
                        f"associative operator '{name}' must have arguments in its result kind"
                    )
        key = (name, arity, kind)
        decl = OpDecl(args, result)
        sym = self.symbols.get(key)
        if sym is None:
            sym = Symbol(
                name,
                arity,
                kind,
                (decl,),
                assoc=assoc,
                comm=comm,
                ctor=ctor,
                prec=prec,
                gather=gather,
                builtin=builtin,
                value=value,
            )
            if isinstance(identity, App):
                sym.identity = identity
            elif identity is not None:
                sym.identity_name = identity
            self.symbols[key] = sym
        else:
            if sym.assoc != assoc or sym.comm != comm:
                raise SignatureError(f"overloads of '{name}' disagree on assoc/comm attributes")
            if identity is not None:
                ident_name = identity.op.name if isinstance(identity, App) else identity
                current = sym.identity.op.name if sym.identity is not None else sym.identity_name
                if current is not None and current != ident_name:
                    raise SignatureError(f"overloads of '{name}' disagree on the identity element")
                if isinstance(identity, App):
                    sym.identity = identity
                else:
                    sym.identity_name = identity
            if decl not in sym.decls:
                sym.decls.append(decl)
            sym.ctor = sym.ctor or ctor
            if prec is not None:
                sym.prec = prec
            if gather is not None:
                sym.gather = gather
        self._clear()
        return sym

    def add_symbol(self, sym: Symbol) -> Symbol:
        """Register a prebuilt symbol; an existing symbol of the same key is kept."""
        key = (sym.name, sym.arity, sym.kind)
        existing = self.symbols.get(key)
        if existing is not None:
            for d in sym.decls:
                if d not in existing.decls:
                    existing.decls.append(d)
            return existing
        self.symbols[key] = sym
        self._clear()
        return sym

    def resolve_identities(self) -> None:
        for sym in self.symbols.values():
            if sym.identity is None and sym.identity_name is not None:
                const = self.symbols.get((sym.identity_name, 0, sym.kind))
                if const is None:
                    raise SignatureError(
                        f"identity '{sym.identity_name}' of '{sym.name}' is not a constant "
                        f"of kind {sym.kind}"
                    )
                sym.identity = App(const)

    def validate(self) -> None:
        self.sorts.validate()
        self.resolve_identities()

    def copy(self) -> "Signature":
        out = Signature(self.sorts.copy())
        for key, sym in self.symbols.items():
            clone = Symbol(
                sym.name,
                sym.arity,
                sym.kind,
                tuple(sym.decls),
                assoc=sym.assoc,
                comm=sym.comm,
                identity=sym.identity,
                identity_name=sym.identity_name,
                ctor=sym.ctor,
                prec=sym._prec,
                gather=sym._gather,
                builtin=sym.builtin,
                value=sym.value,
            )
            out.symbols[key] = clone
        return out

    # lookup

    def lookup(self, name: str, arity: int | None = None) -> list[Symbol]:
        return [
            s
            for (n, a, _), s in self.symbols.items()
            if n == name and (arity is None or a == arity)
        ]

    def symbol(self, name: str, arity: int, kind: str) -> Symbol:
        sym = self.symbols.get((name, arity, self.kind_of(kind)))
        if sym is None:
            raise SignatureError(f"no operator '{name}' of arity {arity} in kind {kind}")
        return sym

    def constant(self, name: str, kind: str | None = None) -> App:
        cands = [s for s in self.lookup(name, 0) if kind is None or s.kind == kind]
        if len(cands) != 1:
            raise SignatureError(f"constant '{name}' is undeclared or ambiguous")
        return App(cands[0])

    def kind_of(self, sort: str) -> str:
        if sort == TUPLE_KIND:
            return sort
        return self.sorts.kind_of(sort)

    def leq(self, a: str, b: str) -> bool:
        if a == b:
            return True
        if TUPLE_KIND in (a, b):
            return False
        return self.sorts.leq(a, b)

    # sorting

    def least_sort(self, term: Term) -> str:
        """Least sort of ``term``, or its kind when no declaration applies."""
        if isinstance(term, Var):
            return term.sort
        cached = self._ls_cache.get(term)
        if cached is not None:
            return cached
        op = term.op
        if op.builtin == "tuple":
            result = TUPLE_KIND
        else:
            arg_sorts = [self.least_sort(a) for a in term.args]
            if op.assoc and len(arg_sorts) > 2:
                result = arg_sorts[0]
                for nxt in arg_sorts[1:]:
                    result = self._result(op, (result, nxt))
            else:
                result = self._result(op, tuple(arg_sorts))
        self._ls_cache[term] = result
        return result

    def _result(self, op: Symbol, arg_sorts: tuple[str, ...]) -> str:
        key = (op, arg_sorts)
        cached = self._result_cache.get(key)
        if cached is not None:
            return cached
        cands = [
            d.result_sort
            for d in op.decls
            if len(d.arg_sorts) == len(arg_sorts)
            and all(self.leq(a, s) for a, s in zip(arg_sorts, d.arg_sorts, strict=True))
        ]
        if not cands:
            result = op.kind
        else:
            result = sorted(self.sorts.minimal(cands))[0]
        self._result_cache[key] = result
        return result

    def has_sort(self, term: Term, sort: str) -> bool:
        return self.leq(self.least_sort(term), sort)

    def is_well_sorted(self, term: Term) -> bool:
        return not is_kind(self.least_sort(term))

    def list_capable(self, var: Var, op: Symbol) -> bool:
        """True iff ``var`` may be bound to a flattened ``op`` term."""
        if is_kind(var.sort):
            return self.kind_of(var.sort) == op.kind
        return any(self.leq(d.result_sort, var.sort) for d in op.decls)
