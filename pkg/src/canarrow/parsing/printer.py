"""Text form of terms and theories that the parser reads back."""

from canarrow.kernel.signature import Signature, Symbol
from canarrow.kernel.sorts import SortGraph
from canarrow.kernel.terms import App, Term, Var
from canarrow.kernel.theory import Condition, Equation, RewriteTheory, Rule
from canarrow.parsing.mixfix import fits_gather
from canarrow.smt.prelude import PRELUDES

_SPECIALS = set("()[]{},")
_CONDITION_SEP = {"eq": "=", "match": ":=", "rewrite": "=>"}


def _quote(name: str) -> str:
    return "".join(f"`{c}" if c in _SPECIALS else c for c in name)


def _prec(term: Term) -> int:
    if isinstance(term, App) and term.op.template is not None and term.args:
        return term.op.prec
    return 0


def _operand(term: Term, op: Symbol, gather: str) -> str:
    text = print_term(term)
    if fits_gather(gather, op.prec, _prec(term)):
        return text
    return f"({text})"


def _mixfix(op: Symbol, args: tuple[Term, ...]) -> str:
    template = op.template
    assert template is not None
    if op.assoc and len(args) > 2:
        # a flattened list prints as a left fold of the binary template
        left = _mixfix(op, args[:-1])
        if not fits_gather(op.gather[0], op.prec, op.prec):
            left = f"({left})"
        right = _operand(args[-1], op, op.gather[1])
        return _fill(template, [left, right])
    return _fill(template, [_operand(a, op, g) for a, g in zip(args, op.gather, strict=True)])


def _fill(template: tuple[str | None, ...], operands: list[str]) -> str:
    parts = []
    it = iter(operands)
    for element in template:
        parts.append(next(it) if element is None else element)
    return " ".join(parts)


def print_term(term: Term) -> str:
    """Render ``term`` with inline sorted variables (``X:Sort``) and minimal parentheses."""
    if isinstance(term, Var):
        return f"{term.name}:{term.sort}"
    op = term.op
    if op.builtin == "tuple":
        return "(" + ", ".join(print_term(a) for a in term.args) + ")"
    if op.template is not None:
        return _mixfix(op, term.args)
    if not term.args:
        return _quote(op.name)
    return f"{_quote(op.name)}(" + ", ".join(print_term(a) for a in term.args) + ")"


def _background(theory: RewriteTheory) -> Signature:
    sig = Signature(SortGraph())
    for name in theory.background:
        PRELUDES[name](sig)
    return sig


def _op_lines(sig: Signature, base: Signature) -> list[str]:
    lines = []
    for key, sym in sig.symbols.items():
        if sym.builtin is not None and key in base.symbols:
            continue
        known = base.symbols.get(key)
        attrs = []
        if sym.assoc:
            attrs.append("assoc")
        if sym.comm:
            attrs.append("comm")
        ident = sym.identity.op.name if sym.identity is not None else sym.identity_name
        if ident is not None:
            attrs.append(f"id: {_quote(ident)}")
        if sym.ctor:
            attrs.append("ctor")
        if sym._prec is not None:
            attrs.append(f"prec {sym._prec}")
        if sym._gather is not None:
            attrs.append(f"gather ({' '.join(sym._gather)})")
        suffix = f" [{' '.join(attrs)}]" if attrs else ""
        for decl in sym.decls:
            if known is not None and decl in known.decls:
                continue
            args = " ".join(decl.arg_sorts)
            lines.append(f"  op {_quote(sym.name)} : {args} -> {decl.result_sort}{suffix} .")
    return lines


def _label(label: str | None) -> str:
    return f"[{label}] : " if label else ""


def _attrs(attrs: frozenset[str]) -> str:
    return f" [{' '.join(sorted(attrs))}]" if attrs else ""


def _condition(cond: Condition) -> str:
    return f"{print_term(cond.lhs)} {_CONDITION_SEP[cond.kind]} {print_term(cond.rhs)}"


def print_equation(eq: Equation) -> str:
    return f"eq {_label(eq.label)}{print_term(eq.lhs)} = {print_term(eq.rhs)}{_attrs(eq.attrs)} ."


def print_rule(rule: Rule) -> str:
    head = "crl" if rule.conditional else "rl"
    text = f"{head} {_label(rule.label)}{print_term(rule.lhs)} => {print_term(rule.rhs)}"
    if rule.conditional:
        text += " if " + " /\\ ".join(_condition(c) for c in rule.conditions)
    return text + _attrs(rule.attrs) + " ."


def print_theory(theory: RewriteTheory) -> str:
    """Module text of ``theory``; parsing it back gives a theory of the same structure."""
    sig = theory.signature
    base = _background(theory)
    lines = [f"mod {theory.name} is"]
    lines.extend(f"  protecting {name} ." for name in theory.background)
    sorts = [s for s in sig.sorts.sorts if s not in base.sorts.sorts]
    if sorts:
        lines.append(f"  sorts {' '.join(sorts)} .")
    for lo, hi in sig.sorts.edges:
        if (lo, hi) not in base.sorts.edges:
            lines.append(f"  subsort {lo} < {hi} .")
    lines.extend(_op_lines(sig, base))
    lines.extend(f"  {print_equation(eq)}" for eq in theory.equations)
    lines.extend(f"  {print_rule(rule)}" for rule in theory.rules)
    lines.append("endm")
    return "\n".join(lines) + "\n"
