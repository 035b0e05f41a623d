import pytest

from canarrow.corpus import CORPUS_DIR

SMALL = """
*** a single counter
mod COUNTER is
  sorts Nat State .
  op 0 : -> Nat [ctor] .
  op s_ : Nat -> Nat [ctor] .
  op st : Nat -> State [ctor] .
  var N : Nat .
  rl [inc] : st(N) => st(s N) [narrowing] .
endm
"""


@pytest.mark.parametrize(
    "file,name,rules,equations",
    [
        ("vending.maude", "NARROWING-VENDING-MACHINE", 2, 1),
        ("idem-vending.maude", "IDEMPOTENCE-VENDING-MACHINE", 2, 4),
        ("bank-account.maude", "BANK-ACCOUNT", 4, 0),
        ("xor-protocol.maude", "XOR-PROTOCOL", 2, None),
        ("proc-counter.maude", "PROC-COUNTER", 1, None),
    ],
)
def test_corpus_modules(file, name, rules, equations):
    from canarrow.parsing import load_theory

    theory = load_theory(CORPUS_DIR / file)
    assert theory.name == name
    assert len(theory.rules) == rules
    if equations is not None:
        assert len(theory.equations) == equations
    assert all(eq.variant for eq in theory.equations)
    assert theory.state_kind is not None


def test_named_module_selection():
    from canarrow.parsing import load_theory, parse_modules
    from canarrow.io import load_txt

    text = load_txt(CORPUS_DIR / "xor-protocol.maude")
    modules = parse_modules(text)
    assert list(modules)[-1] == "XOR-PROTOCOL"
    assert load_theory(CORPUS_DIR / "xor-protocol.maude", "EXCLUSIVE-OR").name == "EXCLUSIVE-OR"


def test_small_module():
    from canarrow.parsing import parse_term, parse_theory, print_term

    theory = parse_theory(SMALL)
    (rule,) = theory.rules
    assert rule.label == "inc"
    assert rule.narrowing and not rule.nonexec
    term = parse_term(theory, "st(s s 0)")
    assert print_term(term) == "st(s s 0)"
    assert theory.least_sort(term) == "State"


@pytest.mark.parametrize(
    "text,message",
    [
        ("", "no module"),
        ("mod M is\n  sort S .\n  op f : S S -> S [idem] .\nendm\n", "idem"),
        ("mod M is\n  protecting NOWHERE .\nendm\n", "NOWHERE"),
        ("mod M is\n  sort S .\n  op a : -> S .\n  ceq a = a if a = a .\nendm\n", "conditional"),
        ("mod M is\n  sort S .\n", "end of module"),
        ("mod M is\n  sort S .\n  op f : S -> S [frobnicate] .\nendm\n", "frobnicate"),
        ("mod M is\n  sort S .\n  op a : -> T .\nendm\n", "T"),
        ("mod M is\n  sort S .\n  op a : -> S .\n  eq a = b .\nendm\n", "no parse"),
        ("mod A is\n  sort S .\nendm\n", "no module named"),
    ],
)
def test_parse_errors(text, message):
    from canarrow.errors import ParseError
    from canarrow.parsing import parse_theory

    with pytest.raises(ParseError, match=message):
        parse_theory(text, "B" if "mod A" in text else None)


def test_parse_error_position():
    from canarrow.errors import ParseError
    from canarrow.parsing import parse_theory

    with pytest.raises(ParseError) as err:
        parse_theory("mod M is\n  sort S .\n  op f : S S -> S [idem] .\nendm\n")
    assert err.value.line == 3


def test_equation_must_decrease_sort():
    from canarrow.errors import ParseError
    from canarrow.parsing import parse_theory

    text = (
        "mod M is\n  sorts A B .\n  subsort A < B .\n  op a : -> A .\n  op b : -> B .\n"
        "  eq a = b [variant] .\nendm\n"
    )
    with pytest.raises(ParseError, match="sort-decreasing"):
        parse_theory(text)


def test_rules_must_be_topmost():
    from canarrow.errors import ParseError
    from canarrow.parsing import parse_theory

    text = (
        "mod M is\n  sorts Elt State .\n  op a : -> Elt .\n  op wrap : State -> State .\n"
        "  op st : Elt -> State .\n"
        "  rl [in] : wrap(st(a)) => st(a) .\nendm\n"
    )
    with pytest.raises(ParseError, match="state-kind"):
        parse_theory(text)


@pytest.mark.parametrize(
    "text",
    [
        "< $ q c >",
        "< M:Marking $ >",
        "< empty >",
    ],
)
def test_term_print_parse(text):
    from canarrow.parsing import load_theory, parse_term, print_term

    theory = load_theory(CORPUS_DIR / "vending.maude")
    term = parse_term(theory, text)
    assert parse_term(theory, print_term(term)) == term


def test_unparseable_term():
    from canarrow.errors import ParseError
    from canarrow.parsing import load_theory, parse_term

    theory = load_theory(CORPUS_DIR / "vending.maude")
    with pytest.raises(ParseError):
        parse_term(theory, "< $ q")


def test_arithmetic_precedence():
    from canarrow.parsing import load_theory, parse_term, print_term

    theory = load_theory(CORPUS_DIR / "bank-account.maude")
    term = parse_term(theory, "X:Real - Y:Real - Z:Real", "Real")
    assert print_term(term) == "X:Real - Y:Real - Z:Real"
    right = parse_term(theory, "X:Real - (Y:Real - Z:Real)", "Real")
    assert right != term
    assert print_term(right) == "X:Real - (Y:Real - Z:Real)"


@pytest.mark.parametrize("file", ["vending.maude", "idem-vending.maude", "bank-account.maude"])
def test_theory_print_parse(file):
    from canarrow.parsing import load_theory, parse_theory, print_theory

    theory = load_theory(CORPUS_DIR / file)
    again = parse_theory(print_theory(theory))
    assert again.structure() == theory.structure()


def test_tokenize_drops_comments():
    from canarrow.parsing import tokenize

    tokens = tokenize("op f`,g : S -> S . *** comment\n--- another\nvar X : S .")
    assert [t.text for t in tokens] == ["op", "f`,g", ":", "S", "->", "S", ".", "var", "X", ":", "S", "."]
    assert tokens[-4].line == 3
