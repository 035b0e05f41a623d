import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Any

import pandas as pd

from canarrow.config_manager import CorpusConfigManager
from canarrow.errors import OptionError, ResourceLimitError, SearchTimeoutError
from canarrow.registry import CORPUS_REGISTRY
from canarrow.search import search
from canarrow.utils import multiprocess_iter

logger = logging.getLogger(__name__)

COLUMNS = [
    "corpus",
    "label",
    "algorithm",
    "max_depth",
    "expected",
    "solutions",
    "match",
    "complete",
    "nodes_created",
    "wall_time",
    "status",
]


def corpus_entry(corpus_id: str) -> dict[str, Any]:
    if corpus_id not in CORPUS_REGISTRY:
        raise OptionError(
            f"unknown corpus id '{corpus_id}', available: {sorted(CORPUS_REGISTRY)}"
        )
    return CORPUS_REGISTRY[corpus_id]


def run_cell(
    path: str,
    label: str,
    smt_backend: str | None = None,
    time_limit: float | None = None,
) -> dict[str, Any]:
    """Run one experiment cell of the corpus file at ``path`` and summarize it as a row.

    A cell that runs out of its time limit is reported with status ``timeout`` and the counts
    reached so far.
    """
    corpus = CorpusConfigManager(path)
    cell = corpus.cell(label)
    if smt_backend is not None:
        cell.problem_config["smt_backend"] = smt_backend
    if time_limit is not None:
        cell.problem_config["time_limit"] = time_limit
    row: dict[str, Any] = {
        "corpus": corpus.name,
        "label": label,
        "algorithm": cell.algorithm,
        "max_depth": cell.max_depth if cell.max_depth is not None else "unbounded",
        "expected": cell.expected,
        "solutions": None,
        "match": None,
        "complete": None,
        "nodes_created": None,
        "wall_time": None,
        "status": "ok",
    }
    if corpus.requires == "external" and not cell.backend.startswith("external"):
        row["status"] = "skipped: needs an external solver"
        return row

    start = time.perf_counter()
    try:
        result = search(cell.problem())
    except SearchTimeoutError as err:
        logger.warning("cell %s timed out: %s", label, err)
        result = err.partial
        row["status"] = "timeout"
    except ResourceLimitError as err:
        logger.warning("cell %s stopped early: %s", label, err)
        result = err.partial
        row["status"] = f"partial: {err}"
    row["wall_time"] = round(time.perf_counter() - start, 3)
    row["solutions"] = result.count
    row["complete"] = result.stats.complete
    row["nodes_created"] = result.stats.nodes_created
    if cell.expected is not None and row["status"] != "timeout":
        row["match"] = result.count == cell.expected
    return row


def bench(
    corpus_id: str,
    labels: list[str] | None = None,
    p: int = 1,
    smt_backend: str | None = None,
    progressbar: bool = True,
    time_limit: float | None = None,
) -> pd.DataFrame:
    """Run the experiment grid of a bundled corpus entry.

    Args:
        corpus_id: Identifier of a registered corpus entry.
        labels: Cells to run; all cells when ``None``.
        p: Worker processes; cells run in the main process for ``p <= 1``.
        smt_backend: Backend spec overriding the cells' setting.
        time_limit: Wall-clock budget per cell in seconds, overriding the cells' setting.

    Returns:
        pd.DataFrame: One row per cell with expected and found solution counts.
    """
    entry = corpus_entry(corpus_id)
    path = entry["path"]
    corpus = CorpusConfigManager(path)
    selected = corpus.labels() if labels is None else labels
    for label in selected:
        corpus.cell(label)

    rows = multiprocess_iter(
        run_cell,
        [{"path": path, "label": label} for label in selected],
        const={"smt_backend": smt_backend, "time_limit": time_limit},
        p=p,
        desc=f"Bench {corpus_id}",
        progressbar=progressbar,
    )
    return pd.DataFrame(rows, columns=COLUMNS)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description="Reproduce the experiment grid of a corpus entry")
    parser.add_argument("corpus", help=f"Corpus id, one of {sorted(CORPUS_REGISTRY)}")
    parser.add_argument(
        "-l", "--label", action="append", default=None, help="Run only this cell (repeatable)"
    )
    parser.add_argument(
        "-p", "--processes", type=int, default=1, help="Number of worker processes"
    )
    parser.add_argument("-o", "--output", type=Path, default=None, help="Path to a CSV file")
    parser.add_argument(
        "--smt-backend", default=None, help="'builtin' or 'external:COMMAND'"
    )
    parser.add_argument(
        "--time-limit", type=float, default=None, help="Wall-clock budget per cell in seconds"
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Log search progress")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)

    try:
        table = bench(
            args.corpus,
            args.label,
            args.processes,
            args.smt_backend,
            time_limit=args.time_limit,
        )
    except ValueError as err:
        print(f"Error: {err}", file=sys.stderr)
        return 2

    print(table.to_string(index=False))
    if args.output is not None:
        args.output.parent.mkdir(parents=True, exist_ok=True)
        table.to_csv(args.output, index=False)
        print(f"Saved results to {args.output}")
    mismatches = table["match"].eq(False).sum()
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
