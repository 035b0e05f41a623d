import logging
import math
import warnings
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Literal

import sympy

from canarrow.errors import SmtBackendError
from canarrow.kernel.terms import Term
from canarrow.registry import SMT_BACKEND_REGISTRY, register_backend
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
    nnf,
)
from canarrow.smt.fourier_motzkin import EliminationLimit, Linear, linear, solve

logger = logging.getLogger(__name__)

Verdict = Literal["sat", "unsat", "unknown"]
DEFAULT_BRANCH_LIMIT = 64


@dataclass
class SmtResult:
    verdict: Verdict
    model: dict[str, str] | None = None
    reason: str | None = None

    @property
    def sat(self) -> bool:
        return self.verdict == "sat"

    @property
    def unsat(self) -> bool:
        return self.verdict == "unsat"


class SmtBackend(ABC):
    """Decision procedure for compiled constraint formulas."""

    name: str = "abstract"

    @abstractmethod
    def check(self, formula: CompiledFormula) -> SmtResult:
        """Decide satisfiability of ``formula``."""


class _Budget(Exception):
    pass


@dataclass
class _Search:
    branch_limit: int
    branches: int = 0
    int_names: set[str] = field(default_factory=set)

    def theory(self, atoms: list[Atom]) -> dict[sympy.Symbol, sympy.Rational] | None:
        constraints: list[Linear] = []
        for a in atoms:
            diff = a.lhs - a.rhs
            if a.rel == "<":
                constraints.append(linear(diff, True))
            elif a.rel == "<=":
                constraints.append(linear(diff, False))
            elif a.rel == ">":
                constraints.append(linear(-diff, True))
            elif a.rel == ">=":
                constraints.append(linear(-diff, False))
            elif a.rel == "=":
                constraints.append(linear(diff, False))
                constraints.append(linear(-diff, False))
            else:
                raise ValueError(f"unexpected relation {a.rel}")
        return self._integral(constraints)

    def _integral(self, constraints: list[Linear]) -> dict[sympy.Symbol, sympy.Rational] | None:
        model = solve(constraints)
        if model is None:
            return None
        for x in sorted(model, key=lambda s: s.name):
            v = model[x]
            if x.is_integer and v.q != 1:
                self.branches += 1
                if self.branches > self.branch_limit:
                    raise _Budget()
                down = linear(x - math.floor(v), False)
                up = linear(math.ceil(v) - x, False)
                return self._integral(constraints + [down]) or self._integral(
                    constraints + [up]
                )
        return model

    def run(
        self, pending: list[Formula], atoms: list[Atom], props: dict[str, bool]
    ) -> tuple[dict, dict[str, bool]] | None:
        pending = list(pending)
        atoms = list(atoms)
        props = dict(props)
        while pending:
            f = pending.pop()
            if isinstance(f, BoolConst):
                if not f.value:
                    return None
            elif isinstance(f, Prop):
                if props.setdefault(f.name, True) is not True:
                    return None
            elif isinstance(f, Not):
                assert isinstance(f.arg, Prop)
                if props.setdefault(f.arg.name, False) is not False:
                    return None
            elif isinstance(f, Atom):
                atoms.append(f)
            elif isinstance(f, And):
                pending.extend(f.args)
            elif isinstance(f, Or):
                if atoms and self.theory(atoms) is None:
                    return None
                for alt in f.args:
                    found = self.run(pending + [alt], atoms, props)
                    if found is not None:
                        return found
                return None
        model = self.theory(atoms) if atoms else {}
        if model is None:
            return None
        return model, props


@register_backend("builtin")
class BuiltinBackend(SmtBackend):
    """Case splitting over the Boolean structure with Fourier-Motzkin for linear atoms.

    Integer variables are handled by branch and bound; non-linear formulas are delegated to
    ``fallback`` when one is given and reported ``unknown`` otherwise.
    """

    name = "builtin"

    def __init__(self, branch_limit: int = DEFAULT_BRANCH_LIMIT, fallback: SmtBackend | None = None):
        self.branch_limit = branch_limit
        self.fallback = fallback

    def check(self, formula: CompiledFormula) -> SmtResult:
        if formula.nonlinear:
            if self.fallback is not None:
                return self.fallback.check(formula)
            return SmtResult("unknown", reason="non-linear arithmetic")
        search = _Search(self.branch_limit)
        try:
            found = search.run([nnf(formula.root)], [], {})
        except (_Budget, EliminationLimit) as err:
            logger.debug("builtin backend gave up: %s", err)
            return SmtResult("unknown", reason="resource limit")
        if found is None:
            return SmtResult("unsat")
        model, props = found
        out = {s.name: str(v) for s, v in sorted(model.items(), key=lambda p: p[0].name)}
        out.update({k: str(v).lower() for k, v in sorted(props.items())})
        return SmtResult("sat", out)


def make_backend(name: str = "builtin", **kwargs) -> SmtBackend:
    try:
        cls = SMT_BACKEND_REGISTRY[name]
    except KeyError as err:
        raise SmtBackendError(
            f"unknown SMT backend '{name}', available: {sorted(SMT_BACKEND_REGISTRY)}"
        ) from err
    return cls(**kwargs)


def check_sat(phi: Term, backend: SmtBackend | None = None) -> SmtResult:
    """Satisfiability of a constraint term over the built-in arithmetic.

    Args:
        phi: Term of kind ``[Boolean]``.
        backend: Decision procedure; the builtin backend when omitted.

    Returns:
        SmtResult: ``sat`` with a model, ``unsat``, or ``unknown`` with a reason.
    """
    backend = backend if backend is not None else BuiltinBackend()
    compiled = compile_formula(phi)
    result = backend.check(compiled)
    if result.verdict == "unknown":
        warnings.warn(
            f"constraint solver returned unknown ({result.reason or 'no reason given'})",
            stacklevel=2,
        )
    return result
