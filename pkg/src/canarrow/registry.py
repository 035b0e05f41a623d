from collections.abc import Callable
from typing import Any

SMT_BACKEND_REGISTRY: dict[str, Any] = {}
CORPUS_REGISTRY: dict[str, dict[str, Any]] = {}


def register_backend(name: str) -> Callable:
    """
    Decorator to register a constraint solver backend under a string identifier.

    Example:
        @register_backend("builtin")
        class BuiltinBackend(SmtBackend): ...
    """

    def decorator(cls):
        SMT_BACKEND_REGISTRY[name] = cls
        return cls

    return decorator


def register_corpus(identifier: str, entry: dict[str, Any]) -> None:
    """Register a bundled benchmark problem under its identifier."""
    if identifier in CORPUS_REGISTRY:
        raise ValueError(f"Corpus entry '{identifier}' already registered.")
    CORPUS_REGISTRY[identifier] = entry


# --- Trigger backend imports ---
# This must come LAST so the above decorators exist before the backend modules import them
import canarrow.smt  # noqa
import canarrow.corpus  # noqa
