__version__ = "0.1.0"

# Registry imports
from .config_manager import CorpusConfigManager, ProblemConfigManager
from .parsing import load_theory, parse_term, parse_theory, print_term
from .registry import (
    CORPUS_REGISTRY,
    SMT_BACKEND_REGISTRY,
    register_backend,
    register_corpus,
)
from .search import Arrow, ReachabilityProblem, SearchOptions, search

__all__ = (
    "register_backend",
    "register_corpus",
    "SMT_BACKEND_REGISTRY",
    "CORPUS_REGISTRY",
    "CorpusConfigManager",
    "ProblemConfigManager",
    "load_theory",
    "parse_term",
    "parse_theory",
    "print_term",
    "Arrow",
    "ReachabilityProblem",
    "SearchOptions",
    "search",
)
