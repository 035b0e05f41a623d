"""Built-in Boolean, Integer and Real operators available to theories."""

import re
from collections.abc import Callable
from functools import lru_cache

from sympy import Rational

from canarrow.errors import ParseError
from canarrow.kernel.signature import OpDecl, Signature, Symbol
from canarrow.kernel.terms import App

BOOLEAN = "Boolean"
INTEGER = "Integer"
REAL = "Real"
BOOL = "Bool"

BOOLEAN_KIND = f"[{BOOLEAN}]"
INTEGER_KIND = f"[{INTEGER}]"
REAL_KIND = f"[{REAL}]"

_BB = (BOOLEAN, BOOLEAN)

TRUE_SYMBOL = Symbol("true", 0, BOOLEAN_KIND, (OpDecl((), BOOLEAN),), ctor=True, builtin="true")
FALSE_SYMBOL = Symbol("false", 0, BOOLEAN_KIND, (OpDecl((), BOOLEAN),), ctor=True, builtin="false")
AND_SYMBOL = Symbol(
    "_and_", 2, BOOLEAN_KIND, (OpDecl(_BB, BOOLEAN),), prec=55, gather=("E", "e"), builtin="and"
)
TRUE = App(TRUE_SYMBOL)
FALSE = App(FALSE_SYMBOL)

INTEGER_LITERAL = re.compile(r"-?\d+")
REAL_LITERAL = re.compile(r"-?\d+/\d+")

# name -> (builtin tag, prec, gather)
_BOOL_OPS = {
    "_or_": ("or", 59, ("E", "e")),
    "_xor_": ("xor", 57, ("E", "e")),
    "_implies_": ("implies", 61, ("e", "E")),
}
_COMPARISONS = {
    "_<_": "lt",
    "_<=_": "le",
    "_>_": "gt",
    "_>=_": "ge",
}
_ARITH = {
    "_+_": ("add", 33, ("E", "e")),
    "_-_": ("sub", 33, ("E", "e")),
    "_*_": ("mul", 31, ("E", "e")),
}


def install_boolean(sig: Signature) -> None:
    """Sort ``Boolean`` with the propositional connectives."""
    if BOOLEAN not in sig.sorts.sorts:
        sig.add_sort(BOOLEAN)
    for sym in (TRUE_SYMBOL, FALSE_SYMBOL, AND_SYMBOL):
        sig.add_symbol(sym)
    for name, (tag, prec, gather) in _BOOL_OPS.items():
        sig.add_op(name, _BB, BOOLEAN, prec=prec, gather=gather, builtin=tag)
    sig.add_op("not_", (BOOLEAN,), BOOLEAN, prec=53, gather=("E",), builtin="not")
    sig.add_op("_===_", _BB, BOOLEAN, prec=51, gather=("e", "e"), builtin="eq")
    sig.add_op("_=/==_", _BB, BOOLEAN, prec=51, gather=("e", "e"), builtin="ne")


def install_real_integer(sig: Signature) -> None:
    """Linear and non-linear arithmetic over the separate sorts ``Integer`` and ``Real``."""
    install_boolean(sig)
    for sort in (INTEGER, REAL):
        if sort not in sig.sorts.sorts:
            sig.add_sort(sort)
        pair = (sort, sort)
        for name, (tag, prec, gather) in _ARITH.items():
            sig.add_op(name, pair, sort, prec=prec, gather=gather, builtin=tag)
        sig.add_op("-_", (sort,), sort, prec=15, gather=("E",), builtin="neg")
        sig.add_op("monus", pair, sort, builtin="monus")
        for name, tag in _COMPARISONS.items():
            sig.add_op(name, pair, BOOLEAN, prec=37, gather=("E", "E"), builtin=tag)
        sig.add_op("_===_", pair, BOOLEAN, prec=51, gather=("e", "e"), builtin="eq")
        sig.add_op("_=/==_", pair, BOOLEAN, prec=51, gather=("e", "e"), builtin="ne")
    sig.add_op("_/_", (REAL, REAL), REAL, prec=31, gather=("E", "e"), builtin="div")


def install_truth_value(sig: Signature) -> None:
    """Sort ``Bool`` with the constants ``true`` and ``false`` and no interpretation."""
    if BOOL not in sig.sorts.sorts:
        sig.add_sort(BOOL)
    sig.add_op("true", (), BOOL, ctor=True)
    sig.add_op("false", (), BOOL, ctor=True)


PRELUDES: dict[str, Callable[[Signature], None]] = {
    "BOOLEAN": install_boolean,
    "REAL-INTEGER": install_real_integer,
    "TRUTH-VALUE": install_truth_value,
}


def is_literal_token(token: str) -> bool:
    return bool(INTEGER_LITERAL.fullmatch(token) or REAL_LITERAL.fullmatch(token))


@lru_cache(maxsize=4096)
def literal_symbol(token: str) -> Symbol:
    """Constant symbol of an Integer (``-3``) or Real (``7/2``) literal; reals keep the ``p/q`` form."""
    if INTEGER_LITERAL.fullmatch(token):
        value = Rational(int(token))
        return Symbol(str(value), 0, INTEGER_KIND, (OpDecl((), INTEGER),), builtin="lit", value=value)
    if REAL_LITERAL.fullmatch(token):
        num, den = token.split("/")
        if int(den) == 0:
            raise ParseError(f"zero denominator in literal '{token}'")
        value = Rational(int(num), int(den))
        name = f"{value.p}/{value.q}"
        return Symbol(name, 0, REAL_KIND, (OpDecl((), REAL),), builtin="lit", value=value)
    raise ParseError(f"'{token}' is not a numeric literal")


def literal(token: str) -> App:
    return App(literal_symbol(token))


def real(value: Rational | int) -> App:
    value = Rational(value)
    return literal(f"{value.p}/{value.q}")


def integer(value: int) -> App:
    return literal(str(int(value)))


def is_true(term) -> bool:
    return term == TRUE
