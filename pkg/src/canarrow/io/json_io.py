import json
from pathlib import Path
from typing import Any


def load_json(json_file: str | Path) -> Any:
    """Load a report written by :func:`save_json`."""
    with open(json_file, encoding="utf-8") as f:
        return json.load(f)


def save_json(data: Any, json_file: str | Path, indent: int = 2) -> None:
    """Write ``data`` as JSON, creating missing parent directories.

    Args:
        data (Any): JSON serializable data, e.g. a run report.
        json_file (str): Path of the file to write.
        indent (int): Indent level.
    """
    json_file = Path(json_file)
    json_file.parent.mkdir(parents=True, exist_ok=True)
    json_file.write_text(dumps_json(data, indent) + "\n", encoding="utf-8")


def dumps_json(data: Any, indent: int = 2) -> str:
    """Serialize data with the layout :func:`save_json` writes; non-ASCII text is kept."""
    return json.dumps(data, indent=indent, ensure_ascii=False)
