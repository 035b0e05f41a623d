"""Exact Fourier-Motzkin elimination over the rationals, with model reconstruction."""

import math
from dataclasses import dataclass

import sympy
from sympy import Rational

MAX_CONSTRAINTS = 20_000


class EliminationLimit(Exception):
    """Raised when elimination produces more constraints than allowed."""


@dataclass(frozen=True)
class Linear:
    """``sum(coeffs[x] * x) + const (< | <=) 0``."""

    coeffs: tuple[tuple[sympy.Symbol, Rational], ...]
    const: Rational
    strict: bool

    def coeff(self, x: sympy.Symbol) -> Rational:
        for y, c in self.coeffs:
            if y == x:
                return c
        return Rational(0)

    def rest_value(self, x: sympy.Symbol, model: dict[sympy.Symbol, Rational]) -> Rational:
        total = self.const
        for y, c in self.coeffs:
            if y != x:
                total += c * model.get(y, Rational(0))
        return total


def linear(expr: sympy.Expr, strict: bool) -> Linear:
    """Linear constraint ``expr < 0`` or ``expr <= 0``; raises ValueError when not linear."""
    expr = sympy.expand(expr)
    coeffs: dict[sympy.Symbol, Rational] = {}
    const = Rational(0)
    for term, c in expr.as_coefficients_dict().items():
        if term == 1:
            const += Rational(c)
        elif isinstance(term, sympy.Symbol):
            coeffs[term] = coeffs.get(term, Rational(0)) + Rational(c)
        else:
            raise ValueError(f"non-linear term {term}")
    items = tuple(sorted(((x, c) for x, c in coeffs.items() if c != 0), key=lambda p: p[0].name))
    if strict and items and all(x.is_integer for x, _ in items):
        # integer tightening: e < 0  <=>  e + 1 <= 0 once all coefficients are integral
        scale = math.lcm(*(int(c.q) for _, c in items), int(const.q))
        scaled = tuple((x, c * scale) for x, c in items)
        return Linear(scaled, const * scale + 1, False)
    return Linear(items, const, strict)


def _normalized(c: Linear) -> Linear:
    if not c.coeffs:
        return c
    lead = abs(c.coeffs[0][1])
    return Linear(tuple((x, v / lead) for x, v in c.coeffs), c.const / lead, c.strict)


def _holds(c: Linear) -> bool:
    return c.const < 0 if c.strict else c.const <= 0


def _combine(pos: Linear, neg: Linear, x: sympy.Symbol) -> Linear:
    a, b = pos.coeff(x), -neg.coeff(x)
    coeffs: dict[sympy.Symbol, Rational] = {}
    for y, c in pos.coeffs:
        coeffs[y] = coeffs.get(y, Rational(0)) + c * b
    for y, c in neg.coeffs:
        coeffs[y] = coeffs.get(y, Rational(0)) + c * a
    items = tuple(sorted(((y, c) for y, c in coeffs.items() if c != 0), key=lambda p: p[0].name))
    return Linear(items, pos.const * b + neg.const * a, pos.strict or neg.strict)


def _pick(lo, lo_strict, hi, hi_strict, integer: bool) -> Rational:
    if integer:
        if lo is not None:
            cand = sympy.ceiling(lo)
            if lo_strict and cand == lo:
                cand += 1
        elif hi is not None:
            cand = sympy.floor(hi)
            if hi_strict and cand == hi:
                cand -= 1
        else:
            cand = sympy.Integer(0)
        cand = Rational(cand)
        ok_lo = lo is None or (cand > lo if lo_strict else cand >= lo)
        ok_hi = hi is None or (cand < hi if hi_strict else cand <= hi)
        if ok_lo and ok_hi:
            return cand
    if lo is not None and hi is not None:
        return lo if lo == hi else (lo + hi) / 2
    if lo is not None:
        return lo + 1 if lo_strict else lo
    if hi is not None:
        return hi - 1 if hi_strict else hi
    return Rational(0)


def solve(constraints: list[Linear]) -> dict[sympy.Symbol, Rational] | None:
    """A rational model of the conjunction of ``constraints``, or None when it is infeasible.

    Integer variables receive integral values where the bounds allow; callers branch on the
    remaining fractional ones.
    """
    current = list(dict.fromkeys(_normalized(c) for c in constraints))
    symbols = sorted({x for c in current for x, _ in c.coeffs}, key=lambda s: s.name)
    history: list[tuple[sympy.Symbol, list[Linear], list[Linear]]] = []
    for x in symbols:
        pos = [c for c in current if c.coeff(x) > 0]
        neg = [c for c in current if c.coeff(x) < 0]
        keep = [c for c in current if c.coeff(x) == 0]
        history.append((x, pos, neg))
        combined = [_combine(p, n, x) for p in pos for n in neg]
        nxt: dict[Linear, None] = {}
        for c in keep + combined:
            if not c.coeffs:
                if not _holds(c):
                    return None
                continue
            nxt.setdefault(_normalized(c), None)
        if len(nxt) > MAX_CONSTRAINTS:
            raise EliminationLimit(f"{len(nxt)} constraints after eliminating {x}")
        current = list(nxt)
    for c in current:
        if not _holds(c):
            return None

    model: dict[sympy.Symbol, Rational] = {}
    for x, pos, neg in reversed(history):
        lo = hi = None
        lo_strict = hi_strict = False
        for c in neg:
            bound = c.rest_value(x, model) / -c.coeff(x)
            if lo is None or bound > lo or (bound == lo and c.strict):
                lo, lo_strict = bound, c.strict
        for c in pos:
            bound = -c.rest_value(x, model) / c.coeff(x)
            if hi is None or bound < hi or (bound == hi and c.strict):
                hi, hi_strict = bound, c.strict
        model[x] = _pick(lo, lo_strict, hi, hi_strict, bool(x.is_integer))
    return model
