"""Machine-readable and text renderings of a search run."""

from dataclasses import dataclass, field
from typing import Any

from canarrow.kernel.terms import Var
from canarrow.parsing.printer import print_term
from canarrow.search.node import SearchResult, SolutionRecord

ENGINE_NAME = "canarrow"
SCHEMA_KEYS = ("engine", "problem", "solutions", "count", "statistics")


def _substitution(solution: SolutionRecord, variables: list[Var]) -> dict[str, str]:
    return {f"{x.name}:{x.sort}": print_term(solution.substitution.image(x)) for x in variables}


@dataclass
class RunReport:
    """Problem echo, solutions and statistics of one run."""

    problem: dict[str, Any]
    solutions: list[dict[str, Any]] = field(default_factory=list)
    statistics: dict[str, Any] = field(default_factory=dict)
    version: str = ""
    partial: bool = False

    @classmethod
    def from_result(
        cls, result: SearchResult, partial: bool = False, **echo: Any
    ) -> "RunReport":
        from canarrow import __version__

        problem = result.problem
        variables = sorted(problem.problem_variables, key=lambda v: v.key)
        options = problem.options
        echo_problem = {
            "module": problem.theory.name,
            "initial": print_term(problem.initial),
            "arrow": problem.arrow.value,
            "target": print_term(problem.target),
            "algorithm": options.algorithm,
            "filter": "on" if options.filter else "off",
            "irreducible": [print_term(t) for t in problem.irreducible],
            "constraint": print_term(problem.constraint),
            "max_depth": problem.max_depth if problem.max_depth is not None else "unbounded",
            "max_solutions": (
                problem.max_solutions if problem.max_solutions is not None else "unbounded"
            ),
            "include_nonexec": options.include_nonexec,
            "unknown_policy": options.unknown_policy,
            "avoid_family": options.avoid_family,
        }
        echo_problem.update(echo)
        solutions = [
            {
                "id": s.id,
                "depth": s.depth,
                "trace": list(s.trace),
                "substitution": _substitution(s, variables),
                "constraint": print_term(s.constraint),
                "verdict": s.verdict,
            }
            for s in result.solutions
        ]
        return cls(echo_problem, solutions, result.stats.as_dict(), __version__, partial)

    def as_dict(self) -> dict[str, Any]:
        out = {
            "engine": {"name": ENGINE_NAME, "version": self.version},
            "problem": self.problem,
            "solutions": self.solutions,
            "count": len(self.solutions),
            "statistics": self.statistics,
        }
        if self.partial:
            out["partial"] = True
        return out

    def text_lines(self) -> list[str]:
        p = self.problem
        lines = [
            f"{p['algorithm']} narrowing in {p['module']}: "
            f"{p['initial']} {p['arrow']} {p['target']}",
        ]
        for s in self.solutions:
            lines.append("")
            lines.append(f"Solution {s['id']} (depth {s['depth']}, {s['verdict']})")
            lines.append(f"  rules: {' '.join(s['trace']) if s['trace'] else '(none)'}")
            for var, value in s["substitution"].items():
                lines.append(f"  {var} --> {value}")
            if s["constraint"] != "true":
                lines.append(f"  constraint: {s['constraint']}")
        lines.append("")
        if not self.solutions:
            lines.append("No solution.")
        stats = self.statistics
        lines.append(
            f"{len(self.solutions)} solutions, {stats.get('nodes_created', 0)} nodes, "
            f"{stats.get('nodes_pruned_unsat', 0)} pruned unsat, "
            f"{stats.get('wall_time', 0.0):.3f}s"
            + (" (partial)" if self.partial else "")
        )
        return lines

    def text(self) -> str:
        return "\n".join(self.text_lines()) + "\n"
