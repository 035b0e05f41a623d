from collections.abc import Iterable

from canarrow.errors import SignatureError


def is_kind(sort: str) -> bool:
    return sort.startswith("[") and sort.endswith("]")


class SortGraph:
    """Finite partial order of sorts, split into connected components.

    Every component has exactly one maximal sort ``S`` and a kind named ``[S]``
    that sits above every sort of the component.
    """

    def __init__(self, sorts: Iterable[str] = (), subsorts: Iterable[tuple[str, str]] = ()):
        self._up: dict[str, frozenset[str]] | None = None
        self._kind: dict[str, str] = {}
        self.sorts: list[str] = []
        self.edges: list[tuple[str, str]] = []
        for s in sorts:
            self.add_sort(s)
        for lo, hi in subsorts:
            self.add_subsort(lo, hi)

    # construction

    def add_sort(self, sort: str) -> None:
        if is_kind(sort) or not sort:
            raise SignatureError(f"invalid sort name '{sort}'")
        if sort not in self.sorts:
            self.sorts.append(sort)
            self._invalidate()

    def add_subsort(self, lower: str, upper: str) -> None:
        for s in (lower, upper):
            if s not in self.sorts:
                raise SignatureError(f"subsort declaration uses undeclared sort '{s}'")
        if lower == upper:
            return
        if (lower, upper) not in self.edges:
            self.edges.append((lower, upper))
            self._invalidate()

    def copy(self) -> "SortGraph":
        return SortGraph(self.sorts, self.edges)

    def _invalidate(self) -> None:
        self._up = None
        self._kind = {}

    # closure

    def _closure(self) -> dict[str, frozenset[str]]:
        if self._up is not None:
            return self._up
        direct: dict[str, set[str]] = {s: set() for s in self.sorts}
        for lo, hi in self.edges:
            direct[lo].add(hi)
        up: dict[str, frozenset[str]] = {}
        for s in self.sorts:
            seen = {s}
            stack = [s]
            while stack:
                for nxt in direct[stack.pop()]:
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
            up[s] = frozenset(seen)
        for s in self.sorts:
            for t in up[s]:
                if t != s and s in up[t]:
                    raise SignatureError(f"cyclic subsort relation between '{s}' and '{t}'")
        self._up = up
        self._kind = {}
        for s in self.sorts:
            self._kind[s] = "[" + self._component_top(s, up) + "]"
        return up

    def _component_top(self, sort: str, up: dict[str, frozenset[str]]) -> str:
        component = {sort}
        stack = [sort]
        down: dict[str, set[str]] = {s: set() for s in self.sorts}
        for lo, hi in self.edges:
            down[hi].add(lo)
        while stack:
            s = stack.pop()
            for nxt in set(up[s]) | down[s]:
                if nxt not in component:
                    component.add(nxt)
                    stack.append(nxt)
        tops = sorted(s for s in component if len(up[s]) == 1)
        if len(tops) != 1:
            raise SignatureError(
                f"connected component of '{sort}' has {len(tops)} maximal sorts {tops}, expected one"
            )
        return tops[0]

    def validate(self) -> None:
        self._closure()

    # queries

    def kind_of(self, sort: str) -> str:
        if is_kind(sort):
            inner = sort[1:-1].split(",")[0].strip()
            if inner not in self.sorts:
                raise SignatureError(f"unknown kind '{sort}'")
            sort = inner
        if sort not in self.sorts:
            raise SignatureError(f"unknown sort '{sort}'")
        self._closure()
        return self._kind[sort]

    def top_of(self, sort: str) -> str:
        return self.kind_of(sort)[1:-1]

    def leq(self, a: str, b: str) -> bool:
        """True iff ``a`` is below or equal to ``b``; kinds are above every sort of their component."""
        if a == b:
            return True
        if is_kind(b):
            return self.kind_of(a) == b
        if is_kind(a):
            return False
        return b in self._closure()[a]

    def component(self, sort: str) -> list[str]:
        kind = self.kind_of(sort)
        return [s for s in self.sorts if self._kind[s] == kind]

    def lower_sorts(self, sort: str) -> list[str]:
        """Sorts (and the kind itself when ``sort`` is a kind) below or equal to ``sort``."""
        below = [s for s in self.component(sort) if self.leq(s, sort)]
        if is_kind(sort):
            below.append(sort)
        return below

    def maximal(self, sorts: Iterable[str]) -> list[str]:
        pool = list(dict.fromkeys(sorts))
        return [s for s in pool if not any(t != s and self.leq(s, t) for t in pool)]

    def minimal(self, sorts: Iterable[str]) -> list[str]:
        pool = list(dict.fromkeys(sorts))
        return [s for s in pool if not any(t != s and self.leq(t, s) for t in pool)]

    def resolve(self, name: str) -> str:
        """Map a written sort or kind (``[S]`` for any ``S`` of the component) to its canonical name."""
        return self.kind_of(name) if is_kind(name) else self._checked(name)

    def _checked(self, sort: str) -> str:
        if sort not in self.sorts:
            raise SignatureError(f"unknown sort '{sort}'")
        return sort
