"""Chart parser for mixfix terms with precedence and gathering."""

from collections.abc import Iterator
from dataclasses import dataclass

from canarrow.errors import ParseError, SignatureError
from canarrow.kernel.canonical import make
from canarrow.kernel.signature import Signature, Symbol
from canarrow.kernel.sorts import is_kind
from canarrow.kernel.terms import App, Term, Var
from canarrow.parsing.lexer import Token, unbackquote
from canarrow.smt.prelude import INTEGER, REAL, is_literal_token, literal_symbol

_MAX_PREC = 10**6


@dataclass(frozen=True)
class _Item:
    term: Term
    prec: int
    end: int


@dataclass(frozen=True)
class _Entry:
    symbol: Symbol
    arg_kinds: tuple[str, ...]


def fits_gather(gather: str, op_prec: int, arg_prec: int) -> bool:
    if gather == "&":
        return True
    if gather == "E":
        return arg_prec <= op_prec
    return arg_prec < op_prec


class TermParser:
    """Parses token sequences into canonical terms of a signature.

    Args:
        signature: Operators, sorts and kinds available to the terms.
        variables: Declared variables by name, mapped to their sort.
    """

    def __init__(self, signature: Signature, variables: dict[str, str] | None = None):
        self.sig = signature
        self.variables = dict(variables or {})
        self.literals = INTEGER in signature.sorts.sorts or REAL in signature.sorts.sorts
        self._by_keyword: dict[str, list[_Entry]] = {}
        self._infix: list[_Entry] = []
        self._named: dict[str, list[_Entry]] = {}
        for sym in signature.symbols.values():
            for kinds in dict.fromkeys(
                tuple(signature.kind_of(s) for s in d.arg_sorts) for d in sym.decls
            ):
                entry = _Entry(sym, kinds)
                template = sym.template
                if template is None:
                    self._named.setdefault(unbackquote(sym.name), []).append(entry)
                elif template[0] is None:
                    self._infix.append(entry)
                else:
                    self._by_keyword.setdefault(template[0], []).append(entry)

    # entry points

    def parse(self, tokens: list[Token], kind: str | None = None) -> Term:
        """Unique parse of ``tokens``, restricted to ``kind`` when given."""
        if not tokens:
            raise ParseError("empty term")
        self._tokens = tokens
        self._texts = [unbackquote(t.text) for t in tokens]
        self._memo: dict[int, list[_Item]] = {}
        n = len(tokens)
        items = self._items(0)
        full = [it for it in items if it.end == n]
        if kind is not None:
            full = [it for it in full if self._kind(it.term) == kind]
        terms = list(dict.fromkeys(it.term for it in full))
        if not terms:
            reached = max((it.end for it in items), default=0)
            at = tokens[min(reached, n - 1)]
            what = f" of kind {kind}" if kind is not None else ""
            raise at.error(f"no parse{what} for '{' '.join(t.text for t in tokens)}'")
        if len(terms) > 1:
            raise tokens[0].error(
                f"ambiguous term '{' '.join(t.text for t in tokens)}': "
                + " | ".join(repr(t) for t in terms[:4])
            )
        return terms[0]

    def parse_any(self, tokens: list[Token], kinds: list[str]) -> Term:
        """Parse preferring the first of ``kinds`` that yields a term."""
        last: ParseError | None = None
        for kind in kinds:
            try:
                return self.parse(tokens, kind)
            except ParseError as err:
                last = err
        try:
            return self.parse(tokens, None)
        except ParseError as err:
            raise last or err from None

    # chart

    def _kind(self, term: Term) -> str:
        if isinstance(term, Var):
            return self.sig.kind_of(term.sort)
        return term.op.kind

    def _items(self, pos: int) -> list[_Item]:
        cached = self._memo.get(pos)
        if cached is not None:
            return cached
        self._memo[pos] = []
        found: dict[_Item, None] = {}
        work = list(self._primaries(pos))
        while work:
            item = work.pop()
            if item in found:
                continue
            found[item] = None
            work.extend(self._extensions(item))
        out = list(found)
        self._memo[pos] = out
        return out

    def _primaries(self, pos: int) -> Iterator[_Item]:
        if pos >= len(self._tokens):
            return
        text = self._texts[pos]
        raw = self._tokens[pos].text
        if raw == "(":
            for it in self._items(pos + 1):
                if it.end < len(self._tokens) and self._tokens[it.end].text == ")":
                    yield _Item(it.term, 0, it.end + 1)
            return
        var = self._variable(raw)
        if var is not None:
            yield _Item(var, 0, pos + 1)
        if self.literals and is_literal_token(raw):
            yield _Item(App(literal_symbol(raw)), 0, pos + 1)
        for entry in self._named.get(text, ()):
            sym = entry.symbol
            if sym.arity == 0:
                yield _Item(App(sym), 0, pos + 1)
            elif pos + 1 < len(self._tokens) and self._tokens[pos + 1].text == "(":
                yield from self._call(entry, pos + 2)
        for entry in self._by_keyword.get(text, ()):
            for args, end in self._complete(entry, 1, pos + 1, ()):
                yield _Item(make(entry.symbol, args), entry.symbol.prec, end)

    def _variable(self, raw: str) -> Var | None:
        if raw in self.variables:
            return Var(raw, self.variables[raw])
        name, colon, sort = raw.rpartition(":")
        if not colon or not name or not sort:
            return None
        try:
            resolved = self.sig.sorts.resolve(sort)
        except SignatureError:
            return None
        if not is_kind(sort) and resolved != sort:
            return None
        return Var(name, resolved)

    def _call(self, entry: _Entry, pos: int) -> Iterator[_Item]:
        """Arguments of a prefix application ``f(a1, ..., an)`` starting after the parenthesis."""

        def rec(k: int, p: int, args: tuple[Term, ...]) -> Iterator[_Item]:
            for it in self._items(p):
                if self._kind(it.term) != entry.arg_kinds[k] or it.end >= len(self._tokens):
                    continue
                nxt = self._tokens[it.end].text
                if k == entry.symbol.arity - 1:
                    if nxt == ")":
                        yield _Item(make(entry.symbol, args + (it.term,)), 0, it.end + 1)
                elif nxt == ",":
                    yield from rec(k + 1, it.end + 1, args + (it.term,))

        yield from rec(0, pos, ())

    def _extensions(self, item: _Item) -> Iterator[_Item]:
        kind = self._kind(item.term)
        for entry in self._infix:
            sym = entry.symbol
            if entry.arg_kinds[0] != kind or not fits_gather(sym.gather[0], sym.prec, item.prec):
                continue
            for args, end in self._complete(entry, 1, item.end, (item.term,)):
                yield _Item(make(sym, args), sym.prec, end)

    def _complete(
        self, entry: _Entry, idx: int, pos: int, args: tuple[Term, ...]
    ) -> Iterator[tuple[tuple[Term, ...], int]]:
        template = entry.symbol.template
        assert template is not None
        if idx == len(template):
            yield args, pos
            return
        element = template[idx]
        if element is not None:
            if pos < len(self._texts) and self._texts[pos] == element:
                yield from self._complete(entry, idx + 1, pos + 1, args)
            return
        k = len(args)
        sym = entry.symbol
        for it in self._items(pos):
            if self._kind(it.term) != entry.arg_kinds[k]:
                continue
            if not fits_gather(sym.gather[k], sym.prec, it.prec):
                continue
            yield from self._complete(entry, idx + 1, it.end, args + (it.term,))
