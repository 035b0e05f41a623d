from pathlib import Path


def load_txt(txt_file: str | Path) -> str:
    """Read a module file; a leading byte order mark is dropped.

    Args:
        txt_file (str): Path to the module file.

    Returns:
        str: The file contents.
    """
    with open(txt_file, encoding="utf-8-sig") as f:
        return f.read()
