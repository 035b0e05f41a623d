import logging
import re
import shutil
import subprocess

import sympy

from canarrow.errors import SmtBackendError
from canarrow.kernel.terms import Term
from canarrow.registry import register_backend
from canarrow.smt.formula import (
    And,
    Atom,
    BoolConst,
    CompiledFormula,
    Formula,
    Not,
    Or,
    Prop,
    compile_formula,
)
from canarrow.smt.solver import SmtBackend, SmtResult

logger = logging.getLogger(__name__)

_SIMPLE_SYMBOL = re.compile(r"[A-Za-z~!@$%^&*_\-+=<>.?/][A-Za-z0-9~!@$%^&*_\-+=<>.?/]*")


def _symbol(name: str) -> str:
    return name if _SIMPLE_SYMBOL.fullmatch(name) else "|" + name.replace("|", "/") + "|"


def _number(value: sympy.Rational) -> str:
    if value.q == 1:
        return str(value.p) if value >= 0 else f"(- {-value.p})"
    num = str(abs(value.p))
    text = f"(/ {num} {value.q})"
    return text if value >= 0 else f"(- {text})"


def _expr(e: sympy.Expr) -> str:
    if isinstance(e, sympy.Symbol):
        return _symbol(e.name)
    if e.is_Rational:
        return _number(sympy.Rational(e))
    if isinstance(e, sympy.Add):
        return "(+ " + " ".join(_expr(a) for a in e.as_ordered_terms()) + ")"
    if isinstance(e, sympy.Mul):
        coeff, rest = e.as_coeff_Mul()
        if coeff == -1:
            return f"(- {_expr(rest)})"
        return "(* " + " ".join(_expr(a) for a in e.as_ordered_factors()) + ")"
    if isinstance(e, sympy.Pow):
        base, exp = e.as_base_exp()
        if exp.is_Integer and exp > 0:
            return "(* " + " ".join([_expr(base)] * int(exp)) + ")"
        if exp.is_Integer and exp < 0:
            return f"(/ 1 {_expr(base ** -exp)})"
    raise SmtBackendError(f"cannot express {e} in SMT-LIB")


_RELATIONS = {"<": "<", "<=": "<=", ">": ">", ">=": ">=", "=": "="}


def _formula(f: Formula) -> str:
    if isinstance(f, BoolConst):
        return "true" if f.value else "false"
    if isinstance(f, Prop):
        return _symbol(f.name)
    if isinstance(f, Atom):
        inner = f"({_RELATIONS.get(f.rel, '=')} {_expr(f.lhs)} {_expr(f.rhs)})"
        return f"(not {inner})" if f.rel == "!=" else inner
    if isinstance(f, Not):
        return f"(not {_formula(f.arg)})"
    op = "and" if isinstance(f, And) else "or"
    return f"({op} " + " ".join(_formula(a) for a in f.args) + ")"


def compiled_to_smtlib(compiled: CompiledFormula) -> str:
    lines = [f"(set-logic {compiled.logic})"]
    for name in compiled.int_symbols:
        lines.append(f"(declare-const {_symbol(name)} Int)")
    for name in compiled.real_symbols:
        lines.append(f"(declare-const {_symbol(name)} Real)")
    for name in _props(compiled.root):
        lines.append(f"(declare-const {_symbol(name)} Bool)")
    lines.append(f"(assert {_formula(compiled.root)})")
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"


def _props(f: Formula) -> list[str]:
    if isinstance(f, Prop):
        return [f.name]
    if isinstance(f, Not):
        return _props(f.arg)
    if isinstance(f, And | Or):
        return list(dict.fromkeys(n for a in f.args for n in _props(a)))
    return []


def to_smtlib(phi: Term) -> str:
    """SMT-LIB 2 script declaring every variable of ``phi`` and asserting it."""
    return compiled_to_smtlib(compile_formula(phi))


@register_backend("external")
class ExternalBackend(SmtBackend):
    """Pipes SMT-LIB scripts to a solver process, e.g. ``z3 -in``."""

    name = "external"

    def __init__(self, command: list[str] | str | None = None, timeout: float = 60.0):
        if command is None:
            command = ["z3", "-in"]
        self.command = command.split() if isinstance(command, str) else list(command)
        self.timeout = timeout

    @property
    def available(self) -> bool:
        return shutil.which(self.command[0]) is not None

    def check(self, formula: CompiledFormula) -> SmtResult:
        script = compiled_to_smtlib(formula)
        try:
            proc = subprocess.run(
                self.command,
                input=script,
                capture_output=True,
                text=True,
                timeout=self.timeout,
                check=False,
            )
        except FileNotFoundError as err:
            raise SmtBackendError(f"SMT solver '{self.command[0]}' not found") from err
        except subprocess.TimeoutExpired:
            return SmtResult("unknown", reason="timeout")
        answer = proc.stdout.strip().splitlines()[0] if proc.stdout.strip() else ""
        logger.debug("external solver answered %r", answer)
        if answer in ("sat", "unsat", "unknown"):
            return SmtResult(answer)
        raise SmtBackendError(f"unexpected solver output: {proc.stdout!r} {proc.stderr!r}")
