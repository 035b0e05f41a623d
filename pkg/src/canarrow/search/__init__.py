from .engine import evaluate_node, narrowing_step, prepare_theory, root_node, search, try_solutions
from .node import SearchNode, SearchResult, SearchStats, SolutionRecord
from .oracles import covers, ground_search, replay, rewrite_steps, skolemize
from .problem import Arrow, ReachabilityProblem, SearchOptions

__all__ = [
    "Arrow",
    "ReachabilityProblem",
    "SearchNode",
    "SearchOptions",
    "SearchResult",
    "SearchStats",
    "SolutionRecord",
    "covers",
    "evaluate_node",
    "ground_search",
    "narrowing_step",
    "prepare_theory",
    "replay",
    "rewrite_steps",
    "root_node",
    "search",
    "skolemize",
    "try_solutions",
]
