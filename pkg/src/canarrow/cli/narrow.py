import argparse
import logging
import sys
from pathlib import Path
from typing import Any

from omegaconf import OmegaConf

from canarrow.config_manager import ProblemConfigManager
from canarrow.errors import CanarrowError, ResourceLimitError
from canarrow.io import dumps_json, save_json
from canarrow.report import RunReport
from canarrow.search import search

logger = logging.getLogger(__name__)

EXIT_FOUND = 0
EXIT_NONE = 1
EXIT_ERROR = 2

# flag -> problem config key
_OVERRIDES = {
    "module": "theory",
    "module_name": "module",
    "initial": "initial",
    "target": "target",
    "arrow": "arrow",
    "algo": "algorithm",
    "filter": "filter",
    "constraint": "constraint",
    "avoid_family": "avoid_family",
    "max_depth": "max_depth",
    "max_solutions": "max_solutions",
    "smt_backend": "smt_backend",
    "unknown_policy": "unknown_policy",
    "time_limit": "time_limit",
}


def split_terms(text: str) -> list[str]:
    """Split ``"t1; t2"`` at semicolons outside parentheses and brackets."""
    parts, depth, current = [], 0, ""
    for ch in text:
        depth += ch in "([{"
        depth -= ch in ")]}"
        if ch == ";" and depth == 0:
            parts.append(current)
            current = ""
        else:
            current += ch
    parts.append(current)
    return [p.strip() for p in parts if p.strip()]


def _bound(text: str) -> int | str:
    return text if text == "unbounded" else int(text)


def problem_config(args: argparse.Namespace) -> tuple[dict[str, Any], Path | None]:
    """Problem config from ``--config`` with command line flags layered on top."""
    cfg: dict[str, Any] = {}
    base_dir = None
    if args.config is not None:
        cfg = OmegaConf.to_container(OmegaConf.load(args.config), resolve=True)
        base_dir = Path(args.config).parent
    for flag, key in _OVERRIDES.items():
        value = getattr(args, flag)
        if value is not None:
            cfg[key] = value
    if args.irreducible is not None:
        cfg["irreducible"] = split_terms(args.irreducible)
    if args.include_nonexec:
        cfg["include_nonexec"] = True
    return cfg, base_dir


def run(args: argparse.Namespace) -> RunReport:
    """Run the reachability problem described by ``args``.

    Raises:
        ResourceLimitError: A cap was hit; ``err.partial`` holds the partial report.
    """
    cfg, base_dir = problem_config(args)
    manager = ProblemConfigManager(cfg, base_dir)
    problem = manager.problem()
    logger.info(
        "searching %s in %s with %s", problem.arrow.value, manager.theory_file, manager.algorithm
    )
    try:
        result = search(problem)
    except ResourceLimitError as err:
        err.partial = RunReport.from_result(err.partial, partial=True)
        raise
    return RunReport.from_result(result)


def render(report: RunReport, output: str) -> str:
    if output == "json":
        return dumps_json(report.as_dict())
    return report.text()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Narrowing-based reachability analysis of a rewrite theory"
    )
    parser.add_argument("--module", default=None, help="Path to the theory file")
    parser.add_argument(
        "--module-name", default=None, help="Module of the theory file to use (default: last)"
    )
    parser.add_argument("--initial", default=None, help="Initial term")
    parser.add_argument(
        "--arrow", default=None, choices=["=>1", "=>+", "=>!", "=>*"], help="Search arrow"
    )
    parser.add_argument("--target", default=None, help="Target term")
    parser.add_argument(
        "--algo",
        default=None,
        help="Algorithm options, e.g. 'canonical' or 'smt finalCheck standard'",
    )
    parser.add_argument(
        "--filter",
        default=None,
        choices=["on", "off"],
        help="Keep only most general unifiers modulo the equations",
    )
    parser.add_argument(
        "--irreducible", default=None, help="Terms that must stay irreducible: 't1; t2; ...'"
    )
    parser.add_argument("--constraint", default=None, help="Initial Boolean constraint")
    parser.add_argument(
        "--time-limit", type=float, default=None, help="Wall-clock budget of the search in seconds"
    )
    parser.add_argument(
        "--avoid-family", default=None, choices=["%", "#", "@", "$"], help="Variable family"
    )
    parser.add_argument(
        "--max-depth", type=_bound, default=None, help="Depth bound or 'unbounded'"
    )
    parser.add_argument(
        "--max-solutions", type=_bound, default=None, help="Solution bound or 'unbounded'"
    )
    parser.add_argument(
        "--smt-backend",
        default=None,
        help="'builtin' or 'external:COMMAND' for an SMT-LIB solver process",
    )
    parser.add_argument(
        "--unknown-policy", default=None, choices=["sat", "error"], help="Undecided constraints"
    )
    parser.add_argument(
        "--include-nonexec", action="store_true", help="Narrow with nonexec rules as well"
    )
    parser.add_argument(
        "--output", default="text", choices=["text", "json"], help="Output format"
    )
    parser.add_argument(
        "--save-report", type=Path, default=None, help="Also write the JSON report to this file"
    )
    parser.add_argument("-c", "--config", type=Path, default=None, help="YAML problem file")
    parser.add_argument("-v", "--verbose", action="store_true", help="Log search progress")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        report = run(args)
    except ResourceLimitError as err:
        print(f"Error: {err}", file=sys.stderr)
        if isinstance(err.partial, RunReport):
            print(render(err.partial, args.output))
            if args.save_report is not None:
                save_json(err.partial.as_dict(), args.save_report)
        return EXIT_ERROR
    except (CanarrowError, ValueError, FileNotFoundError) as err:
        print(f"Error: {err}", file=sys.stderr)
        return EXIT_ERROR

    print(render(report, args.output), end="" if args.output == "text" else "\n")
    if args.save_report is not None:
        save_json(report.as_dict(), args.save_report)
        logger.info("report saved to %s", args.save_report)
    return EXIT_FOUND if report.solutions else EXIT_NONE


if __name__ == "__main__":
    sys.exit(main())
