from dataclasses import dataclass, field
from typing import Literal

from canarrow.kernel.substitution import Substitution, apply
from canarrow.kernel.terms import Term, Var, variables
from canarrow.search.problem import ReachabilityProblem
from canarrow.smt.prelude import TRUE

NodeStatus = Literal["sat", "unsat", "unknown", "unchecked"]
SolutionVerdict = Literal["sat", "conditional"]


@dataclass(frozen=True)
class SearchNode:
    """Constrained state of the search tree: term, irreducible terms and constraint.

    ``step`` maps the variables of the parent node to their images in this node.
    """

    id: int
    parent: int | None
    rule: str | None
    step: Substitution
    term: Term
    depth: int
    irreducible: tuple[Term, ...] = ()
    constraint: Term = TRUE
    status: NodeStatus = "unchecked"

    @property
    def vars(self) -> frozenset[Var]:
        return variables(self.term, self.constraint, *self.irreducible)

    @property
    def alive(self) -> bool:
        return self.status != "unsat"


@dataclass(frozen=True)
class SolutionRecord:
    id: int
    node: int
    depth: int
    substitution: Substitution
    constraint: Term
    verdict: SolutionVerdict
    trace: tuple[str, ...]
    term: Term


@dataclass
class SearchStats:
    nodes_created: int = 0
    nodes_expanded: int = 0
    nodes_pruned_unsat: int = 0
    unifier_calls: int = 0
    levels_completed: int = 0
    wall_time: float = 0.0
    complete: bool = True

    def as_dict(self) -> dict:
        return {
            "nodes_created": self.nodes_created,
            "nodes_expanded": self.nodes_expanded,
            "nodes_pruned_unsat": self.nodes_pruned_unsat,
            "unifier_calls": self.unifier_calls,
            "levels_completed": self.levels_completed,
            "wall_time": round(self.wall_time, 6),
            "complete": self.complete,
        }


@dataclass
class SearchResult:
    problem: ReachabilityProblem
    solutions: list[SolutionRecord] = field(default_factory=list)
    stats: SearchStats = field(default_factory=SearchStats)
    nodes: dict[int, SearchNode] = field(default_factory=dict)

    @property
    def count(self) -> int:
        return len(self.solutions)

    def branch(self, node_id: int) -> list[SearchNode]:
        """Nodes from the root down to ``node_id``."""
        out = []
        current: int | None = node_id
        while current is not None:
            node = self.nodes[current]
            out.append(node)
            current = node.parent
        return out[::-1]

    def path_substitution(self, node_id: int) -> Substitution:
        """Accumulated substitution of the initial variables at ``node_id``."""
        return accumulate(self.problem.initial, self.branch(node_id))


def accumulate(initial: Term, branch: list[SearchNode]) -> Substitution:
    sub = {x: x for x in initial.vars}
    for node in branch:
        if not node.step:
            continue
        sub = {x: apply(t, node.step) for x, t in sub.items()}
    return Substitution(sub)
