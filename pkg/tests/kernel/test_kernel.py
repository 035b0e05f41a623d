import pytest

from canarrow.errors import SignatureError
from canarrow.kernel import (
    FreshSupply,
    Signature,
    SortGraph,
    Substitution,
    Var,
    apply,
    b_equal,
    fresh_rename,
    make,
    positions,
    replace_at,
    term_at,
)


@pytest.fixture
def signature():
    """Vending machine signature built by hand."""
    sig = Signature(SortGraph())
    for sort in ("Coin", "Item", "Money", "Marking", "State"):
        sig.add_sort(sort)
    sig.add_subsort("Coin", "Money")
    sig.add_subsort("Money", "Marking")
    sig.add_subsort("Item", "Marking")
    sig.add_op("empty", (), "Money")
    sig.add_op("__", ("Money", "Money"), "Money", assoc=True, comm=True, identity="empty")
    sig.add_op("__", ("Marking", "Marking"), "Marking", assoc=True, comm=True, identity="empty")
    sig.add_op("<_>", ("Marking",), "State")
    for coin in ("$", "q"):
        sig.add_op(coin, (), "Coin")
    for item in ("c", "a"):
        sig.add_op(item, (), "Item")
    sig.validate()
    return sig


def _union(sig):
    return sig.symbol("__", 2, "Marking")


def test_sort_order(signature):
    sorts = signature.sorts
    assert sorts.leq("Coin", "Marking")
    assert not sorts.leq("Item", "Money")
    assert sorts.kind_of("Coin") == "[Marking]"
    assert sorts.kind_of("State") == "[State]"
    assert sorts.leq("Item", "[Marking]")
    assert not sorts.leq("[Marking]", "Marking")


def test_two_maximal_sorts_rejected():
    graph = SortGraph(["A", "B", "C"], [("A", "B"), ("A", "C")])
    with pytest.raises(SignatureError):
        graph.validate()


def test_cyclic_subsorts_rejected():
    graph = SortGraph(["A", "B"], [("A", "B"), ("B", "A")])
    with pytest.raises(SignatureError):
        graph.validate()


def test_undeclared_subsort():
    graph = SortGraph(["A"])
    with pytest.raises(SignatureError):
        graph.add_subsort("A", "B")


def test_identity_requires_assoc():
    sig = Signature(SortGraph(["S"]))
    sig.add_op("e", (), "S")
    with pytest.raises(SignatureError):
        sig.add_op("_+_", ("S", "S"), "S", comm=True, identity="e")


def test_mixfix_arity_mismatch():
    sig = Signature(SortGraph(["S"]))
    with pytest.raises(SignatureError):
        sig.add_op("_+_", ("S",), "S")


def test_least_sort(signature):
    union = _union(signature)
    dollar, q, c = (signature.constant(n) for n in ("$", "q", "c"))
    assert signature.least_sort(make(union, [dollar, q])) == "Money"
    assert signature.least_sort(make(union, [dollar, c])) == "Marking"
    state = make(signature.symbol("<_>", 1, "State"), [make(union, [q, c])])
    assert signature.least_sort(state) == "State"


def test_ac_canonical_form(signature):
    union = _union(signature)
    dollar, q, empty = (signature.constant(n) for n in ("$", "q", "empty"))
    left = make(union, [dollar, make(union, [q, empty])])
    right = make(union, [make(union, [q, dollar]), empty])
    assert left == right
    assert len(left.args) == 2
    assert make(union, [empty, empty]) == empty
    assert make(union, [dollar, empty]) == dollar


def test_equality_is_modulo_axioms_only(signature):
    union = _union(signature)
    dollar, q = signature.constant("$"), signature.constant("q")
    four = make(union, [q, q, q, q])
    assert not b_equal(four, dollar)
    assert b_equal(make(union, [q, dollar]), make(union, [dollar, q]))


def test_substitution_apply_is_homomorphic(signature):
    union = _union(signature)
    x = Var("X", "Marking")
    q, c = signature.constant("q"), signature.constant("c")
    term = make(union, [x, c])
    result = apply(term, Substitution({x: make(union, [q, q])}))
    assert result == make(union, [q, q, c])
    assert apply(term, Substitution()) == term


def test_substitution_compose(signature):
    union = _union(signature)
    x, y = Var("X", "Marking"), Var("Y", "Marking")
    c = signature.constant("c")
    first = Substitution({x: make(union, [y, c])})
    second = Substitution({y: c})
    composed = first.compose(second)
    assert composed.image(x) == make(union, [c, c])
    assert composed.image(y) == c
    assert composed.restrict([x]).domain == frozenset({x})


def test_fresh_rename_is_consistent(signature):
    union = _union(signature)
    x, y = Var("X", "Marking"), Var("Y", "Money")
    term = make(union, [x, y])
    supply = FreshSupply.above("$", [term, Var("$7", "Money")])
    (renamed, twin), rho = fresh_rename([term, x], supply)
    assert rho.image(x) == Var("$8", "Marking")
    assert rho.image(y) == Var("$9", "Money")
    assert twin == rho.image(x)
    assert all(v.family == "$" for v in renamed.vars)


def test_positions_and_replace(signature):
    state_op = signature.symbol("<_>", 1, "State")
    union = _union(signature)
    q, c, a = (signature.constant(n) for n in ("q", "c", "a"))
    state = make(state_op, [make(union, [q, c])])
    paths = [p for p, _ in positions(state)]
    assert paths[0] == ()
    assert term_at(state, (0,)) == make(union, [q, c])
    swapped = replace_at(state, (0,), make(union, [a, q]))
    assert swapped == make(state_op, [make(union, [q, a])])


@pytest.mark.parametrize("sort", ["Marking", "Money", "Coin", "[Marking]"])
def test_symbol_lookup_by_any_sort_of_the_kind(signature, sort):
    sym = signature.symbol("__", 2, sort)
    assert sym is _union(signature)
    assert sym.kind == "[Marking]"


def test_symbol_lookup_unknown_kind(signature):
    with pytest.raises(SignatureError):
        signature.symbol("__", 2, "State")
