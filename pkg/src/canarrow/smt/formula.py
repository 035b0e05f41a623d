"""Constraint formulas: Boolean-kind terms over the built-in arithmetic.

Formulas live as ordinary terms of kind ``[Boolean]`` so they can be substituted and printed
like any other term. :func:`compile_formula` translates one into a small propositional
structure over sympy expressions that the solvers consume.
"""

from collections.abc import Mapping
from dataclasses import dataclass, field
from itertools import product

import sympy

from canarrow.errors import SortError
from canarrow.kernel.canonical import make
from canarrow.kernel.sorts import is_kind
from canarrow.kernel.substitution import apply
from canarrow.kernel.terms import App, Term, Var
from canarrow.smt.prelude import (
    AND_SYMBOL,
    BOOLEAN,
    BOOLEAN_KIND,
    FALSE,
    INTEGER,
    INTEGER_KIND,
    REAL,
    REAL_KIND,
    TRUE,
)

_ARITH_KINDS = {INTEGER_KIND, REAL_KIND}
_CMP = {"lt": "<", "le": "<=", "gt": ">", "ge": ">=", "eq": "=", "ne": "!="}
NEGATED = {"<": ">=", "<=": ">", ">": "<=", ">=": "<", "=": "!=", "!=": "="}


@dataclass(frozen=True)
class BoolConst:
    value: bool


@dataclass(frozen=True)
class Prop:
    """Propositional variable: a Boolean variable or an uninterpreted Boolean atom."""

    name: str


@dataclass(frozen=True)
class Atom:
    rel: str
    lhs: sympy.Expr
    rhs: sympy.Expr


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    args: tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    args: tuple["Formula", ...]


Formula = BoolConst | Prop | Atom | Not | And | Or


@dataclass
class CompiledFormula:
    root: Formula
    int_symbols: dict[str, sympy.Symbol] = field(default_factory=dict)
    real_symbols: dict[str, sympy.Symbol] = field(default_factory=dict)
    props: dict[str, Term] = field(default_factory=dict)
    nonlinear: bool = False

    @property
    def logic(self) -> str:
        if not self.int_symbols and not self.real_symbols:
            return "QF_UF" if self.props else "QF_LRA"
        arith = "N" if self.nonlinear else "L"
        if self.int_symbols and self.real_symbols:
            return f"QF_{arith}IRA"
        return f"QF_{arith}IA" if self.int_symbols else f"QF_{arith}RA"


def _term_kind(t: Term) -> str:
    if isinstance(t, Var):
        return t.sort if is_kind(t.sort) else f"[{t.sort}]"
    return t.op.kind


# formula terms


def conjoin(phi: Term, psi: Term) -> Term:
    """Conjunction that keeps both conjuncts as written; ``true`` is neutral."""
    if phi == TRUE:
        return psi
    if psi == TRUE:
        return phi
    return make(AND_SYMBOL, [phi, psi])


def conjoin_all(formulas) -> Term:
    out = TRUE
    for f in formulas:
        out = conjoin(out, f)
    return out


def _is_arith(t: Term) -> bool:
    if isinstance(t, Var):
        return t.sort in (INTEGER, REAL) or t.sort in _ARITH_KINDS
    if t.op.skolem:
        return t.op.kind in _ARITH_KINDS
    if t.op.builtin in ("lit", "add", "sub", "mul", "div", "neg", "monus"):
        return all(_is_arith(a) for a in t.args)
    return False


def substitute(phi: Term, sub: Mapping[Var, Term]) -> Term:
    """Apply ``sub`` to a formula; arithmetic and Boolean variables must stay in their domain."""
    for x in phi.vars:
        if x not in sub:
            continue
        value = sub[x]
        if x.sort in (INTEGER, REAL) and not _is_arith(value):
            raise SortError(f"constraint variable {x!r} bound to non-arithmetic term {value!r}")
        if x.sort == BOOLEAN and _term_kind(value) != BOOLEAN_KIND:
            raise SortError(f"Boolean variable {x!r} bound to {value!r}")
    return apply(phi, sub)


# compilation


class _Compiler:
    def __init__(self) -> None:
        self.out = CompiledFormula(BoolConst(True))
        self._names: dict[str, Var | Term] = {}

    def _name_for(self, key: Var | Term, base: str) -> str:
        name = base
        while name in self._names and self._names[name] != key:
            name = name + "'"
        self._names[name] = key
        return name

    def symbol(self, t: Term) -> sympy.Symbol:
        if isinstance(t, Var):
            integer = t.sort in (INTEGER, INTEGER_KIND)
            name = self._name_for(t, t.name)
        else:
            integer = t.op.kind == INTEGER_KIND
            name = self._name_for(t, t.op.name)
        table = self.out.int_symbols if integer else self.out.real_symbols
        sym = table.get(name)
        if sym is None:
            sym = sympy.Symbol(name, integer=True) if integer else sympy.Symbol(name, real=True)
            table[name] = sym
        return sym

    def expr(self, t: Term) -> list[tuple[tuple[Formula, ...], sympy.Expr]]:
        """Guarded cases ``(conditions, expression)`` of an arithmetic term."""
        if isinstance(t, Var) or (t.op.builtin is None):
            return [((), self.symbol(t))]
        tag = t.op.builtin
        if tag == "lit":
            return [((), sympy.Rational(t.op.value))]
        cases = [self.expr(a) for a in t.args]
        out = []
        for combo in product(*cases):
            guards = tuple(g for c in combo for g in c[0])
            vals = [c[1] for c in combo]
            if tag == "add":
                out.append((guards, vals[0] + vals[1]))
            elif tag == "sub":
                out.append((guards, vals[0] - vals[1]))
            elif tag == "mul":
                out.append((guards, vals[0] * vals[1]))
            elif tag == "div":
                out.append((guards, vals[0] / vals[1]))
            elif tag == "neg":
                out.append((guards, -vals[0]))
            elif tag == "monus":
                a, b = vals
                out.append((guards + (Atom(">=", a, b),), a - b))
                out.append((guards + (Atom("<", a, b),), sympy.Integer(0)))
            else:
                out.append(((), self.symbol(t)))
        return out

    def _atom(self, rel: str, lhs: Term, rhs: Term) -> Formula:
        alts: list[Formula] = []
        for (g1, e1), (g2, e2) in product(self.expr(lhs), self.expr(rhs)):
            atom = Atom(rel, e1, e2)
            if not self.out.nonlinear and not _linear(atom):
                self.out.nonlinear = True
            alts.append(And(g1 + g2 + (atom,)) if g1 or g2 else atom)
        return alts[0] if len(alts) == 1 else Or(tuple(alts))

    def formula(self, t: Term) -> Formula:
        if isinstance(t, Var):
            return Prop(self._name_for(t, t.name))
        tag = t.op.builtin
        if tag == "true":
            return BoolConst(True)
        if tag == "false":
            return BoolConst(False)
        if tag in ("and", "or"):
            parts: list[Formula] = []
            for a in t.args:
                f = self.formula(a)
                same = And if tag == "and" else Or
                parts.extend(f.args if isinstance(f, same) else (f,))
            return And(tuple(parts)) if tag == "and" else Or(tuple(parts))
        if tag == "not":
            return Not(self.formula(t.args[0]))
        if tag == "implies":
            return Or((Not(self.formula(t.args[0])), self.formula(t.args[1])))
        if tag == "xor":
            a, b = self.formula(t.args[0]), self.formula(t.args[1])
            return Or((And((a, Not(b))), And((Not(a), b))))
        if tag in ("eq", "ne") and _term_kind(t.args[0]) == BOOLEAN_KIND:
            a, b = self.formula(t.args[0]), self.formula(t.args[1])
            iff = Or((And((a, b)), And((Not(a), Not(b)))))
            return iff if tag == "eq" else Not(iff)
        if tag in _CMP:
            return self._atom(_CMP[tag], t.args[0], t.args[1])
        # uninterpreted Boolean atom; skolem constants stand for variables
        if t.is_ground and not _has_skolem(t):
            return BoolConst(False)
        name = self._name_for(t, f"atom:{t!r}")
        self.out.props[name] = t
        return Prop(name)


def _has_skolem(t: Term) -> bool:
    return isinstance(t, App) and (t.op.skolem or any(_has_skolem(a) for a in t.args))


def _linear(atom: Atom) -> bool:
    expr = sympy.expand(atom.lhs - atom.rhs)
    syms = sorted(expr.free_symbols, key=lambda s: s.name)
    if not syms:
        return True
    try:
        return sympy.Poly(expr, *syms).total_degree() <= 1
    except sympy.PolynomialError:
        return False


def compile_formula(phi: Term) -> CompiledFormula:
    """Translate a ``[Boolean]`` term into a propositional structure over sympy atoms."""
    if _term_kind(phi) != BOOLEAN_KIND:
        raise SortError(f"constraint {phi!r} is not of kind {BOOLEAN_KIND}")
    compiler = _Compiler()
    compiler.out.root = compiler.formula(phi)
    return compiler.out


def nnf(f: Formula, negate: bool = False) -> Formula:
    """Negation normal form; disequalities become a disjunction of strict comparisons."""
    if isinstance(f, BoolConst):
        return BoolConst(f.value != negate)
    if isinstance(f, Prop):
        return Not(f) if negate else f
    if isinstance(f, Atom):
        rel = NEGATED[f.rel] if negate else f.rel
        if rel == "!=":
            return Or((Atom("<", f.lhs, f.rhs), Atom(">", f.lhs, f.rhs)))
        return Atom(rel, f.lhs, f.rhs)
    if isinstance(f, Not):
        return nnf(f.arg, not negate)
    args = tuple(nnf(a, negate) for a in f.args)
    if isinstance(f, And):
        return Or(args) if negate else And(args)
    return And(args) if negate else Or(args)


__all__ = [
    "FALSE",
    "TRUE",
    "And",
    "Atom",
    "BoolConst",
    "CompiledFormula",
    "Formula",
    "Not",
    "Or",
    "Prop",
    "compile_formula",
    "conjoin",
    "conjoin_all",
    "nnf",
    "substitute",
]
