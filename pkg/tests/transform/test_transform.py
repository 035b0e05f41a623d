import pytest

from canarrow.corpus import CORPUS_DIR
from canarrow.parsing import load_theory, parse_theory

UNSUPPORTED = """
mod UNSUPPORTED is
  protecting REAL-INTEGER .
  sort State .
  op st : Real -> State .
  vars n m : Real .
  crl [same] : st(n) => st(m) if n = m .
endm
"""


@pytest.fixture(scope="module")
def bank():
    return load_theory(CORPUS_DIR / "bank-account.maude")


def _rule(theory, label):
    return next(r for r in theory.rules if r.label == label)


def test_conditional_rules_become_guarded(bank):
    from canarrow.transform import is_guard, split_guard, transform_theory

    out = transform_theory(bank)
    assert not any(r.conditional for r in out.rules)
    for label in ("w1", "w2"):
        original, guarded = _rule(bank, label), _rule(out, label)
        assert guarded.narrowing
        assert guarded.lhs == original.lhs
        assert is_guard(guarded.rhs)
        phi, payload = split_guard(guarded.rhs)
        assert phi == original.conditions[0].lhs
        assert payload == original.rhs


def test_unconditional_rules_are_kept(bank):
    from canarrow.transform import transform_theory

    out = transform_theory(bank)
    assert _rule(out, "w-req") == _rule(bank, "w-req")
    assert _rule(out, "dep").nonexec
    assert [r.label for r in out.rules] == [r.label for r in bank.rules]


def test_transform_is_idempotent(bank):
    from canarrow.transform import transform_theory

    once = transform_theory(bank)
    assert transform_theory(once) is once


def test_transform_keeps_source_signature(bank):
    from canarrow.transform import GUARD, transform_theory

    transform_theory(bank)
    assert not bank.signature.lookup(GUARD)


def test_split_and_strip_guards(bank):
    from canarrow.kernel import make
    from canarrow.parsing import parse_term
    from canarrow.smt import TRUE
    from canarrow.transform import guard_symbol, split_guard, strip_guards, transform_theory

    out = transform_theory(bank)
    guard = guard_symbol(out)
    state = parse_term(out, "< bal: X:Real pend: Y:Real overdraft: false > # mt")
    phi = parse_term(out, "X:Real > Y:Real", "Boolean")
    psi = parse_term(out, "Y:Real > 0/1", "Boolean")
    nested = make(guard, [phi, make(guard, [psi, state])])
    assert strip_guards(nested) == ([phi, psi], state)
    assert split_guard(state) == (TRUE, state)
    assert strip_guards(state) == ([], state)


def test_unsupported_condition():
    from canarrow.errors import UnsupportedConditionError
    from canarrow.transform import transform_theory

    with pytest.raises(UnsupportedConditionError):
        transform_theory(parse_theory(UNSUPPORTED))


def test_guard_needs_state_kind():
    from canarrow.errors import StructuralError
    from canarrow.transform import guard_symbol

    theory = parse_theory("mod ARITH is\n  protecting REAL-INTEGER .\nendm\n")
    with pytest.raises(StructuralError):
        guard_symbol(theory)
