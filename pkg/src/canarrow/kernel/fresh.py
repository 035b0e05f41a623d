import itertools
from collections.abc import Iterable

from canarrow.kernel.substitution import Substitution, apply
from canarrow.kernel.terms import Term, Var, ordered_variables


class FreshSupply:
    """Counter of fresh variable names within one family (``$``, ``#``, ``%`` or ``@``)."""

    def __init__(self, family: str = "$", start: int = 1):
        self.family = family
        self._counter = itertools.count(start)

    @classmethod
    def above(cls, family: str, terms: Iterable[Term]) -> "FreshSupply":
        """Supply whose first name is above every index of ``family`` used in ``terms``."""
        top = 0
        for t in terms:
            for v in t.vars:
                if v.family == family and v.index > top:
                    top = v.index
        return cls(family, top + 1)

    def next_var(self, sort: str) -> Var:
        return Var(f"{self.family}{next(self._counter)}", sort)


def renaming(variables: Iterable[Var], supply: FreshSupply) -> Substitution:
    return Substitution({v: supply.next_var(v.sort) for v in variables})


def fresh_rename(terms: Iterable[Term], supply: FreshSupply) -> tuple[list[Term], Substitution]:
    """Rename every variable of ``terms`` consistently, in order of first occurrence."""
    terms = list(terms)
    rho = renaming(ordered_variables(*terms), supply)
    return [apply(t, rho) for t in terms], rho
