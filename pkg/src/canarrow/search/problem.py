from dataclasses import dataclass, field
from enum import Enum
from typing import Literal

from canarrow.errors import OptionError
from canarrow.kernel.terms import Term, variables
from canarrow.kernel.theory import RewriteTheory
from canarrow.smt.prelude import TRUE
from canarrow.smt.solver import SmtBackend
from canarrow.unify.unification import DEFAULT_MAX_UNIFIERS
from canarrow.variants.narrowing import DEFAULT_DEPTH_CAP

SmtMode = Literal["off", "check", "noCheck", "finalCheck"]
UnknownPolicy = Literal["sat", "error"]

ALGORITHM_WORDS = ("standard", "canonical", "smt", "noCheck", "finalCheck")
VARIABLE_FAMILIES = ("$", "#", "%", "@")


class Arrow(str, Enum):
    ONE = "=>1"
    PLUS = "=>+"
    STAR = "=>*"
    BANG = "=>!"

    def admits(self, depth: int) -> bool:
        if self is Arrow.ONE:
            return depth == 1
        if self is Arrow.PLUS:
            return depth >= 1
        return depth >= 0

    @classmethod
    def parse(cls, text: str) -> "Arrow":
        try:
            return cls(text.strip())
        except ValueError as err:
            raise OptionError(
                f"unknown search arrow '{text}', expected one of {[a.value for a in cls]}"
            ) from err


@dataclass
class SearchOptions:
    """How a reachability problem is explored.

    Args:
        canonical: Canonical narrowing (irreducibility constraints) instead of standard.
        smt: ``off``, ``check`` (prune unsatisfiable nodes), ``noCheck`` (carry constraints
            without checking) or ``finalCheck`` (check only at solutions).
        filter: Keep only unifiers that are most general modulo the equations. When off, every
            unifier found for some variant of the problem opens a branch.
        include_nonexec: Let rules marked ``nonexec`` take part in narrowing.
        unknown_policy: Treat an undecided constraint as satisfiable, or raise.
        variant_depth_cap: Depth cap of every variant computation.
        max_unifiers: Branch cap of every B-unification call.
        backend: Constraint backend; the builtin solver when ``None``.
        avoid_family: Fresh variable family requested by the caller, recorded only.
        time_limit: Wall-clock budget of one search in seconds; unlimited when ``None``.
    """

    canonical: bool = False
    smt: SmtMode = "off"
    filter: bool = False
    include_nonexec: bool = False
    unknown_policy: UnknownPolicy = "sat"
    variant_depth_cap: int = DEFAULT_DEPTH_CAP
    max_unifiers: int = DEFAULT_MAX_UNIFIERS
    backend: SmtBackend | None = None
    avoid_family: str = "$"
    time_limit: float | None = None

    def __post_init__(self) -> None:
        if self.time_limit is not None and self.time_limit <= 0:
            raise OptionError(f"time limit must be positive, got {self.time_limit}")
        if self.smt not in ("off", "check", "noCheck", "finalCheck"):
            raise OptionError(f"unknown smt mode '{self.smt}'")
        if self.unknown_policy not in ("sat", "error"):
            raise OptionError(f"unknown policy '{self.unknown_policy}', expected sat or error")
        if self.avoid_family not in VARIABLE_FAMILIES:
            raise OptionError(
                f"variable family '{self.avoid_family}' is not one of {list(VARIABLE_FAMILIES)}"
            )

    @property
    def algorithm(self) -> str:
        words = ["canonical" if self.canonical else "standard"]
        if self.smt != "off":
            words.insert(0, "smt")
        if self.smt in ("noCheck", "finalCheck"):
            words.insert(1, self.smt)
        return " ".join(words)

    @classmethod
    def from_algorithm(cls, text: str, **kwargs) -> "SearchOptions":
        """Options from an algorithm set such as ``"smt finalCheck canonical"``."""
        words = text.replace(",", " ").split()
        unknown = [w for w in words if w not in ALGORITHM_WORDS]
        if unknown:
            raise OptionError(f"unknown algorithm options {unknown}, expected {ALGORITHM_WORDS}")
        if "standard" in words and "canonical" in words:
            raise OptionError("standard and canonical narrowing exclude each other")
        if "noCheck" in words and "finalCheck" in words:
            raise OptionError("noCheck and finalCheck exclude each other")
        smt: SmtMode = "off"
        if "smt" in words:
            smt = "check"
            if "noCheck" in words:
                smt = "noCheck"
            elif "finalCheck" in words:
                smt = "finalCheck"
        elif "noCheck" in words or "finalCheck" in words:
            raise OptionError("noCheck and finalCheck cannot appear without smt")
        return cls(canonical="canonical" in words, smt=smt, **kwargs)


@dataclass
class ReachabilityProblem:
    """Goal ``initial ~> target`` under ``arrow`` with initial constraints.

    ``None`` bounds mean unbounded.
    """

    theory: RewriteTheory
    initial: Term
    target: Term
    arrow: Arrow = Arrow.STAR
    options: SearchOptions = field(default_factory=SearchOptions)
    irreducible: tuple[Term, ...] = ()
    constraint: Term = TRUE
    max_depth: int | None = None
    max_solutions: int | None = None

    def __post_init__(self) -> None:
        self.arrow = Arrow(self.arrow)
        self.irreducible = tuple(self.irreducible)
        if self.max_depth is not None and self.max_depth <= 0:
            raise OptionError(f"max depth must be positive, got {self.max_depth}")
        if self.max_solutions is not None and self.max_solutions <= 0:
            raise OptionError(f"max solutions must be positive, got {self.max_solutions}")
        reserved = sorted(
            v.name
            for v in variables(self.initial, self.target, self.constraint, *self.irreducible)
            if v.family == "$"
        )
        if reserved:
            raise OptionError(f"problem variables {reserved} use the reserved '$' family")

    @property
    def problem_variables(self):
        return variables(self.initial, self.target)
