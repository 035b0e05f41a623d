"""Bundled benchmark theories and their experiment grids.

Every ``<id>.yaml`` next to this file is registered under its ``name`` when the registry is
imported. Theory files are resolved relative to this package.
"""

from importlib import resources
from pathlib import Path

from omegaconf import OmegaConf

from canarrow.registry import register_corpus

CORPUS_DIR = Path(str(resources.files(__name__)))


def _register_bundled() -> None:
    for path in sorted(CORPUS_DIR.glob("*.yaml")):
        entry = OmegaConf.to_container(OmegaConf.load(path), resolve=True)
        entry["path"] = str(path)
        register_corpus(entry.get("name", path.stem), entry)


_register_bundled()

__all__ = ["CORPUS_DIR"]
