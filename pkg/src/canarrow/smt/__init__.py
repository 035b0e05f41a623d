from .formula import (
    CompiledFormula,
    compile_formula,
    conjoin,
    conjoin_all,
    substitute,
)
from .prelude import FALSE, PRELUDES, TRUE, install_boolean, install_real_integer, literal
from .smtlib import ExternalBackend, to_smtlib
from .solver import BuiltinBackend, SmtBackend, SmtResult, check_sat, make_backend

__all__ = [
    "FALSE",
    "PRELUDES",
    "TRUE",
    "BuiltinBackend",
    "CompiledFormula",
    "ExternalBackend",
    "SmtBackend",
    "SmtResult",
    "check_sat",
    "compile_formula",
    "conjoin",
    "conjoin_all",
    "install_boolean",
    "install_real_integer",
    "literal",
    "make_backend",
    "substitute",
    "to_smtlib",
]
