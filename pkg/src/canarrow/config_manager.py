from importlib import resources
from pathlib import Path
from typing import Any

from omegaconf import DictConfig, ListConfig, OmegaConf

from canarrow.kernel.terms import Term
from canarrow.kernel.theory import RewriteTheory
from canarrow.parsing.theory_parser import load_theory, parse_term
from canarrow.search.problem import ALGORITHM_WORDS, Arrow, ReachabilityProblem, SearchOptions
from canarrow.smt.prelude import BOOLEAN_KIND, TRUE
from canarrow.smt.solver import make_backend

_REQUIRED = ["theory", "initial", "target"]
_ARROWS = [a.value for a in Arrow]
_UNBOUNDED = ("unbounded", None)


def _bound(value: Any) -> int | None:
    return None if value in _UNBOUNDED else int(value)


def resolve_theory_path(theory: str | Path, base: str | Path | None = None) -> Path:
    """Find a module file given as a path, relative to ``base``, or shipped with the corpus."""
    path = Path(theory)
    if path.is_absolute() and path.exists():
        return path
    if base is not None and (Path(base) / path).exists():
        return Path(base) / path
    if path.exists():
        return path
    bundled = resources.files("canarrow.corpus") / str(theory)
    if bundled.is_file():
        return Path(str(bundled))
    raise FileNotFoundError(f"theory file not found: {theory}")


class ProblemConfigManager:
    """Validated view of one reachability problem configuration.

    Args:
        problem_config: Mapping with at least ``theory``, ``initial`` and ``target``.
        base_dir: Directory relative theory paths are resolved against.
        strict: Print every problem found and raise instead of accepting the config.
    """

    def __init__(
        self,
        problem_config: dict | DictConfig,
        base_dir: str | Path | None = None,
        strict: bool = True,
    ):
        self.problem_config = problem_config
        self.base_dir = base_dir
        self._theory: RewriteTheory | None = None

        errs = []
        for req in _REQUIRED:
            if req not in self.problem_config:
                errs.append(f"Missing required field '{req}' for problem '{self.label}'")
        for key in ("theory", "initial", "target"):
            value = self.problem_config.get(key)
            if key in self.problem_config and (not isinstance(value, str) or value == ""):
                errs.append(f"{key} entry '{value}' must be a not empty string")

        if self.arrow not in _ARROWS:
            errs.append(f"arrow entry '{self.arrow}' must be one of {_ARROWS}")

        words = str(self.algorithm).replace(",", " ").split()
        unknown = [w for w in words if w not in ALGORITHM_WORDS]
        if unknown:
            errs.append(f"algorithm entry '{self.algorithm}' has unknown options {unknown}")

        for key in ("max_depth", "max_solutions"):
            value = self.problem_config.get(key)
            if value in _UNBOUNDED:
                continue
            if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
                errs.append(f"{key} entry '{value}' must be a positive integer or 'unbounded'")

        if not isinstance(self.irreducible, list | ListConfig):
            errs.append(f"irreducible entry '{self.irreducible}' must be a list of terms")

        if self.unknown_policy not in ("sat", "error"):
            errs.append(f"unknown_policy entry '{self.unknown_policy}' must be 'sat' or 'error'")

        if self.filter not in ("on", "off", True, False):
            errs.append(f"filter entry '{self.filter}' must be 'on' or 'off'")

        limit = self.problem_config.get("time_limit")
        if limit is not None and (
            isinstance(limit, bool) or not isinstance(limit, int | float) or limit <= 0
        ):
            errs.append(f"time_limit entry '{limit}' must be a positive number of seconds")

        if errs != [] and strict:
            for err in errs:
                print(err)
            raise ValueError(f"Config for problem '{self.label}' is invalid")

    @property
    def label(self) -> str:
        return str(self.problem_config.get("label", self.problem_config.get("name", "problem")))

    @property
    def theory_file(self) -> Path:
        return resolve_theory_path(self.problem_config["theory"], self.base_dir)

    @property
    def module(self) -> str | None:
        return self.problem_config.get("module")

    @property
    def initial(self) -> str:
        return self.problem_config["initial"]

    @property
    def target(self) -> str:
        return self.problem_config["target"]

    @property
    def arrow(self) -> str:
        return str(self.problem_config.get("arrow", "=>*"))

    @property
    def algorithm(self) -> str:
        return str(self.problem_config.get("algorithm", "standard"))

    @property
    def max_depth(self) -> int | None:
        return _bound(self.problem_config.get("max_depth"))

    @property
    def max_solutions(self) -> int | None:
        return _bound(self.problem_config.get("max_solutions"))

    @property
    def irreducible(self) -> list[str]:
        return self.problem_config.get("irreducible", [])

    @property
    def constraint(self) -> str | None:
        return self.problem_config.get("constraint")

    @property
    def include_nonexec(self) -> bool:
        return bool(self.problem_config.get("include_nonexec", False))

    @property
    def unknown_policy(self) -> str:
        return str(self.problem_config.get("unknown_policy", "sat"))

    @property
    def filter(self) -> Any:
        return self.problem_config.get("filter", "off")

    @property
    def backend(self) -> str:
        return str(self.problem_config.get("smt_backend", "builtin"))

    @property
    def avoid_family(self) -> str:
        return str(self.problem_config.get("avoid_family", "$"))

    @property
    def time_limit(self) -> float | None:
        value = self.problem_config.get("time_limit")
        return None if value is None else float(value)

    @property
    def expected(self) -> int | None:
        value = self.problem_config.get("expected")
        return None if value is None else int(value)

    def theory(self) -> RewriteTheory:
        if self._theory is None:
            self._theory = load_theory(self.theory_file, self.module)
        return self._theory

    def options(self, **overrides: Any) -> SearchOptions:
        backend = overrides.pop("backend", None)
        if backend is None:
            backend = _backend_from_spec(self.backend)
        return SearchOptions.from_algorithm(
            self.algorithm,
            filter=self.filter in ("on", True),
            include_nonexec=self.include_nonexec,
            unknown_policy=self.unknown_policy,
            avoid_family=self.avoid_family,
            time_limit=self.time_limit,
            backend=backend,
            **overrides,
        )

    def problem(self, **overrides: Any) -> ReachabilityProblem:
        """The reachability problem described by this config, parsed in its theory."""
        theory = self.theory()
        initial = parse_term(theory, self.initial)
        target = parse_term(theory, self.target)
        irreducible: tuple[Term, ...] = tuple(parse_term(theory, t) for t in self.irreducible)
        constraint = TRUE
        if self.constraint:
            constraint = parse_term(theory, self.constraint, BOOLEAN_KIND)
        return ReachabilityProblem(
            theory,
            initial,
            target,
            Arrow.parse(self.arrow),
            self.options(**overrides),
            irreducible,
            constraint,
            self.max_depth,
            self.max_solutions,
        )


def _backend_from_spec(spec: str):
    """``builtin``, ``external`` or ``external:COMMAND``."""
    name, _, command = spec.partition(":")
    if name == "external" and command:
        return make_backend("external", command=command.strip().strip('"'))
    return make_backend(name)


class CorpusConfigManager:
    """An experiment grid: shared problem settings plus one entry per cell.

    ``defaults`` are merged below every cell, so a cell only states what differs.
    """

    def __init__(self, config: dict | DictConfig | str | Path, strict: bool = True):
        base_dir = None
        if isinstance(config, str | Path):
            base_dir = Path(config).parent
            self.config = OmegaConf.load(config)
        else:
            self.config = config
        self.cells: list[ProblemConfigManager] = []

        defaults = self.config.get("defaults", {}) or {}
        cells_cfg = self.config.get("cells", [])
        if not isinstance(cells_cfg, list | ListConfig):
            raise ValueError(f"Invalid type for cells: {type(cells_cfg)}. Must be a list.")
        for cell in cells_cfg:
            merged = OmegaConf.to_container(OmegaConf.merge(defaults, cell), resolve=True)
            self.cells.append(ProblemConfigManager(merged, base_dir, strict=strict))

    @property
    def name(self) -> str:
        return self.config["name"]

    @property
    def requires(self) -> str | None:
        return self.config.get("requires")

    def cell(self, label: str) -> ProblemConfigManager:
        for cell in self.cells:
            if cell.label == label:
                return cell
        raise ValueError(f"No cell found with label '{label}'")

    def labels(self) -> list[str]:
        return [cell.label for cell in self.cells]

    def __len__(self) -> int:
        return len(self.cells)

    def __getitem__(self, label: str) -> ProblemConfigManager:
        return self.cell(label)
