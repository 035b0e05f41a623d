from dataclasses import dataclass, field, replace

from canarrow.errors import SignatureError
from canarrow.kernel.canonical import b_canonical
from canarrow.kernel.signature import Signature
from canarrow.kernel.terms import App, Term, Var, variables

STATE_SORT = "State"


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term
    label: str | None = None
    attrs: frozenset[str] = frozenset()

    @property
    def variant(self) -> bool:
        return "variant" in self.attrs


@dataclass(frozen=True)
class Condition:
    """One conjunct ``lhs = rhs`` of a rule condition; ``kind`` is ``eq``, ``match`` or ``rewrite``."""

    lhs: Term
    rhs: Term
    kind: str = "eq"


@dataclass(frozen=True)
class Rule:
    lhs: Term
    rhs: Term
    label: str | None = None
    conditions: tuple[Condition, ...] = ()
    attrs: frozenset[str] = frozenset()

    @property
    def conditional(self) -> bool:
        return bool(self.conditions)

    @property
    def nonexec(self) -> bool:
        return "nonexec" in self.attrs

    @property
    def narrowing(self) -> bool:
        return "narrowing" in self.attrs

    @property
    def vars(self) -> frozenset[Var]:
        out = variables(self.lhs, self.rhs)
        for c in self.conditions:
            out = out | variables(c.lhs, c.rhs)
        return out


@dataclass
class RewriteTheory:
    """Topmost order-sorted rewrite theory ``(signature, variant equations, rules)``."""

    name: str
    signature: Signature
    equations: list[Equation] = field(default_factory=list)
    rules: list[Rule] = field(default_factory=list)
    background: tuple[str, ...] = ()

    @property
    def variant_equations(self) -> list[Equation]:
        return [e for e in self.equations if e.variant]

    @property
    def state_kind(self) -> str | None:
        if STATE_SORT in self.signature.sorts.sorts:
            return self.signature.kind_of(STATE_SORT)
        if self.rules:
            return self.signature.kind_of(self.signature.least_sort(self.rules[0].lhs))
        return None

    def least_sort(self, term: Term) -> str:
        return self.signature.least_sort(term)

    def leq(self, a: str, b: str) -> bool:
        return self.signature.leq(a, b)

    def kind_of(self, sort: str) -> str:
        return self.signature.kind_of(sort)

    def with_rules(self, rules: list[Rule]) -> "RewriteTheory":
        return replace(self, rules=list(rules))

    def validate(self) -> None:
        """Check the sort hierarchy, equations and the topmost shape of the rules."""
        sig = self.signature
        sig.validate()
        for eq in self.equations:
            if isinstance(eq.lhs, Var):
                raise SignatureError(f"equation {eq.label or ''} has a variable left-hand side")
            if not variables(eq.rhs) <= variables(eq.lhs):
                raise SignatureError(
                    f"equation {eq.label or ''} has right-hand side variables not in its left-hand side"
                )
            lhs_sort, rhs_sort = sig.least_sort(eq.lhs), sig.least_sort(eq.rhs)
            if sig.kind_of(lhs_sort) != sig.kind_of(rhs_sort):
                raise SignatureError(f"equation {eq.label or ''} relates terms of different kinds")
            if not sig.leq(rhs_sort, lhs_sort):
                raise SignatureError(
                    f"equation {eq.label or ''} is not sort-decreasing: {rhs_sort} is not below {lhs_sort}"
                )
        kind = self.state_kind
        for rule in self.rules:
            if not isinstance(rule.lhs, App):
                raise SignatureError(f"rule {rule.label or ''} has a variable left-hand side")
            for side in (rule.lhs, rule.rhs):
                side_kind = sig.kind_of(sig.least_sort(side))
                if kind is not None and side_kind != kind:
                    raise SignatureError(
                        f"rule {rule.label or ''} is not topmost: {side_kind} is not the state kind {kind}"
                    )
            for sub in _proper_subterms(rule.lhs):
                if kind is not None and sub_kind(sig, sub) == kind:
                    raise SignatureError(
                        f"rule {rule.label or ''} has a state-kind subterm below its root"
                    )

    def structure(self) -> tuple:
        """Comparable summary used to check that printing and parsing round-trip."""
        sig = self.signature
        ops = sorted(
            (
                s.name,
                s.arity,
                s.kind,
                tuple(sorted((d.arg_sorts, d.result_sort) for d in s.decls)),
                s.assoc,
                s.comm,
                s.identity.op.name if s.identity is not None else s.identity_name,
                s.ctor,
            )
            for s in sig.symbols.values()
        )
        eqs = [(b_canonical(e.lhs), b_canonical(e.rhs), e.label, e.attrs) for e in self.equations]
        rules = [(r.lhs, r.rhs, r.label, r.conditions, r.attrs) for r in self.rules]
        return (
            tuple(sorted(sig.sorts.sorts)),
            tuple(sorted(sig.sorts.edges)),
            tuple(ops),
            tuple(eqs),
            tuple(rules),
        )


def _proper_subterms(term: App):
    for a in term.args:
        if isinstance(a, App):
            yield a
            yield from _proper_subterms(a)


def sub_kind(sig: Signature, term: Term) -> str:
    return sig.kind_of(sig.least_sort(term))
