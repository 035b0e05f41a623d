import logging

from canarrow.errors import NonTerminationError
from canarrow.kernel.canonical import make
from canarrow.kernel.fresh import FreshSupply, renaming
from canarrow.kernel.substitution import Substitution, apply
from canarrow.kernel.terms import App, Term, Var
from canarrow.kernel.theory import Equation, RewriteTheory
from canarrow.unify.matching import first_match

logger = logging.getLogger(__name__)

DEFAULT_MAX_STEPS = 100_000


class Normalizer:
    """Innermost rewriting with the oriented equations of a theory, memoized per term.

    Equations are tried in declaration order and the first matching one is applied, so the
    result is deterministic.
    """

    def __init__(self, theory: RewriteTheory, max_steps: int = DEFAULT_MAX_STEPS):
        self.theory = theory
        self.max_steps = max_steps
        self.steps = 0
        self._cache: dict[Term, Term] = {}
        # equation variables are renamed into their own family so they never meet term variables
        supply = FreshSupply("@", 1)
        self.equations: list[Equation] = []
        for eq in theory.equations:
            rho = renaming(sorted(eq.lhs.vars, key=lambda v: v.key), supply)
            self.equations.append(
                Equation(apply(eq.lhs, rho), apply(eq.rhs, rho), eq.label, eq.attrs)
            )
        self._by_op: dict = {}
        for eq in self.equations:
            assert isinstance(eq.lhs, App)
            self._by_op.setdefault(eq.lhs.op, []).append(eq)

    def normalize(self, term: Term) -> Term:
        self.steps = 0
        return self._norm(term)

    __call__ = normalize

    def is_irreducible(self, term: Term) -> bool:
        return self.normalize(term) == term

    def _norm(self, term: Term) -> Term:
        if isinstance(term, Var):
            return term
        cached = self._cache.get(term)
        if cached is not None:
            return cached
        args = [self._norm(a) for a in term.args]
        current = term
        if any(a is not b for a, b in zip(args, term.args, strict=True)):
            current = make(term.op, args)
        result = current
        if isinstance(current, App) and (current is term or current.op == term.op):
            result = self._top(current)
        elif current is not term:
            result = self._norm(current)
        self._cache[term] = result
        return result

    def _top(self, term: App) -> Term:
        sig = self.theory.signature
        for eq in self._by_op.get(term.op, ()):
            sigma = first_match(sig, eq.lhs, term)
            if sigma is None:
                continue
            self.steps += 1
            if self.steps > self.max_steps:
                raise NonTerminationError(
                    f"normalization exceeded {self.max_steps} rewrite steps"
                )
            return self._norm(apply(eq.rhs, sigma))
        self._cache[term] = term
        return term


def normalize(theory: RewriteTheory, term: Term) -> Term:
    return normalizer_for(theory).normalize(term)


def is_irreducible(theory: RewriteTheory, term: Term) -> bool:
    return normalizer_for(theory).is_irreducible(term)


def normalize_substitution(theory: RewriteTheory, sub: Substitution) -> Substitution:
    norm = normalizer_for(theory)
    return Substitution({x: norm.normalize(t) for x, t in sub.items()})


_NORMALIZERS: dict[int, tuple[RewriteTheory, Normalizer]] = {}


def normalizer_for(theory: RewriteTheory) -> Normalizer:
    """Shared normalizer of ``theory`` (one cache per theory object)."""
    entry = _NORMALIZERS.get(id(theory))
    if entry is None or entry[0] is not theory:
        entry = (theory, Normalizer(theory))
        _NORMALIZERS[id(theory)] = entry
    return entry[1]
