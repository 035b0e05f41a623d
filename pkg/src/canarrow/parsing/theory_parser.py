"""Parser for modules in the usual ``mod NAME is ... endm`` surface syntax."""

import logging
from dataclasses import dataclass, field
from pathlib import Path

from canarrow.errors import ParseError, SignatureError
from canarrow.io import load_txt
from canarrow.kernel.signature import Signature
from canarrow.kernel.sorts import SortGraph
from canarrow.kernel.terms import Term
from canarrow.kernel.theory import Condition, Equation, RewriteTheory, Rule
from canarrow.parsing.lexer import Token, join_adjacent, tokenize, unbackquote
from canarrow.parsing.mixfix import TermParser
from canarrow.smt.prelude import PRELUDES

logger = logging.getLogger(__name__)

_STATEMENT_ATTRS = {"variant", "narrowing", "nonexec", "owise"}
_OP_FLAGS = {"assoc", "comm", "ctor"}
_UNSUPPORTED_OP_ATTRS = {"idem", "iter", "memo", "frozen", "strat", "poly", "special", "format"}


@dataclass
class _OpSpec:
    names: list[str]
    args: list[str]
    result: str
    attrs: dict
    token: Token


@dataclass
class _Module:
    name: str
    kind: str
    imports: list[str] = field(default_factory=list)
    sorts: list[str] = field(default_factory=list)
    subsorts: list[tuple[str, str]] = field(default_factory=list)
    ops: list[_OpSpec] = field(default_factory=list)
    variables: dict[str, str] = field(default_factory=dict)
    statements: list[list[Token]] = field(default_factory=list)


def _split_statements(tokens: list[Token], start: int, end_words: set[str]) -> tuple[list[list[Token]], int]:
    statements: list[list[Token]] = []
    current: list[Token] = []
    i = start
    while i < len(tokens):
        tok = tokens[i]
        if not current and tok.text in end_words:
            return statements, i
        if tok.text == ".":
            if not current:
                raise tok.error("empty statement")
            statements.append(current)
            current = []
        else:
            current.append(tok)
        i += 1
    raise (tokens[-1] if tokens else Token("", 1, 1)).error("missing end of module")


def _sort_name(tokens: list[Token], i: int) -> tuple[str, int]:
    """A sort (``S``) or kind (``[S]``) at ``tokens[i]``."""
    if tokens[i].text == "[":
        if i + 2 >= len(tokens) or tokens[i + 2].text != "]":
            raise tokens[i].error("malformed kind")
        return f"[{tokens[i + 1].text}]", i + 3
    return tokens[i].text, i + 1


def _parse_attrs(tokens: list[Token]) -> dict:
    attrs: dict = {}
    i = 0
    while i < len(tokens):
        word = tokens[i].text
        if word in _OP_FLAGS:
            attrs[word] = True
            i += 1
        elif word == "id:":
            j = i + 1
            depth = 0
            while j < len(tokens):
                t = tokens[j].text
                if depth == 0 and j > i + 1 and t in _OP_FLAGS | {"prec", "gather", "id:", "metadata"}:
                    break
                depth += t in "([{"
                depth -= t in ")]}"
                j += 1
            attrs["id"] = tokens[i + 1 : j]
            i = j
        elif word == "prec":
            attrs["prec"] = int(tokens[i + 1].text)
            i += 2
        elif word == "gather":
            if tokens[i + 1].text != "(":
                raise tokens[i].error("gather expects a parenthesized pattern")
            j = i + 2
            pattern = []
            while tokens[j].text != ")":
                pattern.append(tokens[j].text)
                j += 1
            if any(g not in ("e", "E", "&") for g in pattern):
                raise tokens[i].error(f"bad gather pattern {pattern}")
            attrs["gather"] = tuple(pattern)
            i = j + 1
        elif word == "metadata":
            i += 2
        elif word in _UNSUPPORTED_OP_ATTRS:
            if word == "idem":
                raise tokens[i].error(
                    "idem is not supported; state idempotence with variant equations"
                )
            raise tokens[i].error(f"unsupported operator attribute '{word}'")
        else:
            raise tokens[i].error(f"unknown operator attribute '{word}'")
    return attrs


def _op_spec(stmt: list[Token], plural: bool) -> _OpSpec:
    colon = next((i for i, t in enumerate(stmt) if t.text == ":" and i > 1), None)
    if colon is None:
        raise stmt[0].error("operator declaration without ':'")
    name_toks = stmt[1:colon]
    if plural:
        names = []
        i = 0
        while i < len(name_toks):
            if name_toks[i].text == "(":
                depth, j = 1, i + 1
                while depth:
                    depth += {"(": 1, ")": -1}.get(name_toks[j].text, 0)
                    j += 1
                names.append(unbackquote(join_adjacent(name_toks[i + 1 : j - 1])))
                i = j
            else:
                names.append(unbackquote(name_toks[i].text))
                i += 1
    else:
        names = [unbackquote(join_adjacent(name_toks))]
    i = colon + 1
    args: list[str] = []
    while i < len(stmt) and stmt[i].text != "->":
        name, i = _sort_name(stmt, i)
        args.append(name)
    if i >= len(stmt):
        raise stmt[0].error("operator declaration without '->'")
    result, i = _sort_name(stmt, i + 1)
    attrs: dict = {}
    if i < len(stmt):
        if stmt[i].text != "[" or stmt[-1].text != "]":
            raise stmt[i].error("expected attributes in brackets")
        attrs = _parse_attrs(stmt[i + 1 : -1])
    return _OpSpec(names, args, result, attrs, stmt[0])


def _trailing_attrs(tokens: list[Token]) -> tuple[list[Token], frozenset[str]]:
    """Split ``[variant]``-style statement attributes off the end of a statement."""
    if not tokens or tokens[-1].text != "]":
        return tokens, frozenset()
    depth = 0
    for i in range(len(tokens) - 1, -1, -1):
        t = tokens[i].text
        if t == "]":
            depth += 1
        elif t == "[":
            depth -= 1
            if depth == 0:
                words = [tok.text for tok in tokens[i + 1 : -1]]
                if words and all(w in _STATEMENT_ATTRS for w in words):
                    return tokens[:i], frozenset(words)
                return tokens, frozenset()
    return tokens, frozenset()


def _label(tokens: list[Token]) -> tuple[str | None, list[Token]]:
    if len(tokens) >= 4 and tokens[0].text == "[" and tokens[2].text == "]" and tokens[3].text == ":":
        return tokens[1].text, tokens[4:]
    return None, tokens


def _split_top(tokens: list[Token], word: str) -> list[list[Token]]:
    parts: list[list[Token]] = [[]]
    depth = 0
    for tok in tokens:
        if tok.text in ("(", "[", "{"):
            depth += 1
        elif tok.text in (")", "]", "}"):
            depth -= 1
        if depth == 0 and tok.text == word:
            parts.append([])
        else:
            parts[-1].append(tok)
    return parts


class TheoryParser:
    """Parses a text with one or more modules; later modules may import earlier ones."""

    def __init__(self) -> None:
        self.modules: dict[str, _Module] = {}
        self.theories: dict[str, RewriteTheory] = {}

    def parse(self, text: str) -> dict[str, RewriteTheory]:
        tokens = tokenize(text)
        i = 0
        while i < len(tokens):
            tok = tokens[i]
            if tok.text in ("mod", "fmod", "th"):
                if i + 2 >= len(tokens) or tokens[i + 2].text != "is":
                    raise tok.error("expected 'mod NAME is'")
                mod = _Module(tokens[i + 1].text, tok.text)
                ends = {"endm", "endfm", "endth"}
                statements, j = _split_statements(tokens, i + 3, ends)
                self._collect(mod, statements)
                self.modules[mod.name] = mod
                self.theories[mod.name] = self._build(mod)
                i = j + 1
            elif tok.text == "load":
                i += 2
            else:
                raise tok.error(f"unexpected '{tok.text}' outside a module")
        return self.theories

    # declarations

    def _collect(self, mod: _Module, statements: list[list[Token]]) -> None:
        for stmt in statements:
            head = stmt[0].text
            if head in ("protecting", "including", "extending", "pr", "inc", "ex"):
                mod.imports.append(stmt[1].text)
            elif head in ("sort", "sorts"):
                mod.sorts.extend(t.text for t in stmt[1:])
            elif head in ("subsort", "subsorts"):
                groups = _split_top(stmt[1:], "<")
                for lower, upper in zip(groups, groups[1:], strict=False):
                    for lo in lower:
                        for hi in upper:
                            mod.subsorts.append((lo.text, hi.text))
            elif head in ("op", "ops"):
                mod.ops.append(_op_spec(stmt, head == "ops"))
            elif head in ("var", "vars"):
                colon = next((k for k, t in enumerate(stmt) if t.text == ":"), None)
                if colon is None:
                    raise stmt[0].error("variable declaration without ':'")
                sort, _ = _sort_name(stmt, colon + 1)
                for t in stmt[1:colon]:
                    mod.variables[t.text] = sort
            elif head in ("eq", "ceq", "rl", "crl", "mb", "cmb"):
                mod.statements.append(stmt)
            else:
                raise stmt[0].error(f"unknown declaration '{head}'")

    def _declare(self, sig: Signature, mod: _Module, background: list[str], seen: set[str]) -> None:
        if mod.name in seen:
            return
        seen.add(mod.name)
        for name in mod.imports:
            if name in PRELUDES:
                PRELUDES[name](sig)
                background.append(name)
            elif name in self.modules:
                self._declare(sig, self.modules[name], background, seen)
            else:
                raise ParseError(f"module '{mod.name}' imports unknown module '{name}'")
        for s in mod.sorts:
            if s not in sig.sorts.sorts:
                sig.add_sort(s)
        for lo, hi in mod.subsorts:
            sig.add_subsort(lo, hi)

    def _declare_ops(self, sig: Signature, mod: _Module, seen: set[str]) -> None:
        if mod.name in seen:
            return
        seen.add(mod.name)
        for name in mod.imports:
            if name in self.modules:
                self._declare_ops(sig, self.modules[name], seen)
        for spec in mod.ops:
            for name in spec.names:
                try:
                    sig.add_op(
                        name,
                        spec.args,
                        spec.result,
                        assoc=spec.attrs.get("assoc", False),
                        comm=spec.attrs.get("comm", False),
                        identity=(
                            unbackquote(join_adjacent(spec.attrs["id"]))
                            if "id" in spec.attrs
                            else None
                        ),
                        ctor=spec.attrs.get("ctor", False),
                        prec=spec.attrs.get("prec"),
                        gather=spec.attrs.get("gather"),
                    )
                except SignatureError as err:
                    raise spec.token.error(str(err)) from err

    # statements

    def _build(self, mod: _Module) -> RewriteTheory:
        sig = Signature(SortGraph())
        background: list[str] = []
        self._declare(sig, mod, background, set())
        try:
            sig.sorts.validate()
        except SignatureError as err:
            raise ParseError(f"module '{mod.name}': {err}") from err
        self._declare_ops(sig, mod, set())
        try:
            sig.validate()
        except SignatureError as err:
            raise ParseError(f"module '{mod.name}': {err}") from err

        theory = RewriteTheory(mod.name, sig, background=tuple(dict.fromkeys(background)))
        parsers: dict[str, TermParser] = {}
        # imported statements are parsed again so their terms use this module's operators
        for owner, stmt in self._statements(mod, set()):
            if owner.name not in parsers:
                parsers[owner.name] = TermParser(sig, owner.variables)
            parser = parsers[owner.name]
            head = stmt[0]
            if head.text in ("mb", "cmb"):
                raise head.error("membership axioms are not supported")
            if head.text == "ceq":
                raise head.error("conditional equations are not supported")
            label, body = _label(stmt[1:])
            body, attrs = _trailing_attrs(body)
            if head.text == "eq":
                parts = _split_top(body, "=")
                if len(parts) != 2:
                    raise head.error("equation needs exactly one '='")
                lhs = parser.parse(parts[0])
                rhs = parser.parse(parts[1], sig.kind_of(sig.least_sort(lhs)))
                theory.equations.append(Equation(lhs, rhs, label, attrs))
            else:
                theory.rules.append(self._rule(parser, theory, head, label, body, attrs))
        try:
            theory.validate()
        except SignatureError as err:
            raise ParseError(f"module '{mod.name}': {err}") from err
        logger.debug(
            "parsed module %s: %d sorts, %d operators, %d equations, %d rules",
            mod.name,
            len(sig.sorts.sorts),
            len(sig.symbols),
            len(theory.equations),
            len(theory.rules),
        )
        return theory

    def _statements(self, mod: _Module, seen: set[str]) -> list[tuple[_Module, list[Token]]]:
        if mod.name in seen:
            return []
        seen.add(mod.name)
        out = []
        for name in mod.imports:
            if name in self.modules:
                out.extend(self._statements(self.modules[name], seen))
        out.extend((mod, stmt) for stmt in mod.statements)
        return out

    def _rule(
        self,
        parser: TermParser,
        theory: RewriteTheory,
        head: Token,
        label: str | None,
        body: list[Token],
        attrs: frozenset[str],
    ) -> Rule:
        sig = theory.signature
        conditions: tuple[Condition, ...] = ()
        if head.text == "crl":
            parts = _split_top(body, "if")
            if len(parts) != 2:
                raise head.error("conditional rule needs exactly one 'if'")
            body = parts[0]
            conditions = tuple(self._condition(parser, sig, c) for c in _split_top(parts[1], "/\\"))
        sides = _split_top(body, "=>")
        if len(sides) != 2:
            raise head.error("rule needs exactly one '=>'")
        kinds = [theory.state_kind] if theory.state_kind else []
        lhs = parser.parse_any(sides[0], kinds)
        rhs = parser.parse(sides[1], sig.kind_of(sig.least_sort(lhs)))
        return Rule(lhs, rhs, label, conditions, attrs)

    def _condition(self, parser: TermParser, sig: Signature, tokens: list[Token]) -> Condition:
        for word, kind in (("=", "eq"), (":=", "match"), ("=>", "rewrite")):
            parts = _split_top(tokens, word)
            if len(parts) == 2:
                lhs = parser.parse(parts[0])
                rhs = parser.parse(parts[1], sig.kind_of(sig.least_sort(lhs)))
                return Condition(lhs, rhs, kind)
        raise tokens[0].error("condition must be an equation 't = u'")


def parse_modules(text: str) -> dict[str, RewriteTheory]:
    """All modules of ``text`` by name, in declaration order."""
    return TheoryParser().parse(text)


def parse_theory(text: str, name: str | None = None) -> RewriteTheory:
    """The module called ``name``, or the last module of ``text``."""
    theories = parse_modules(text)
    if not theories:
        raise ParseError("no module found")
    if name is None:
        return list(theories.values())[-1]
    if name not in theories:
        raise ParseError(f"no module named '{name}'")
    return theories[name]


def load_theory(path: str | Path, name: str | None = None) -> RewriteTheory:
    return parse_theory(load_txt(path), name)


def parse_term(theory: RewriteTheory, text: str, kind: str | None = None) -> Term:
    """Parse a term in the signature of ``theory`` (inline variables ``X:Sort``)."""
    tokens = tokenize(text)
    parser = TermParser(theory.signature)
    if kind is None:
        kinds = [theory.state_kind] if theory.state_kind else []
        return parser.parse_any(tokens, kinds)
    return parser.parse(tokens, theory.signature.kind_of(kind))
