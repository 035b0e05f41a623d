from collections import Counter

import numpy as np
import pytest

from canarrow.corpus import CORPUS_DIR
from canarrow.kernel import App, Var, b_canonical, b_equal, make
from canarrow.parsing import load_theory


@pytest.fixture(scope="module")
def vending():
    return load_theory(CORPUS_DIR / "vending.maude")


def _alphabet(sig):
    constants = [make(sig.symbol(name, 0, "[Marking]")) for name in ("$", "q", "c", "a")]
    return constants + [Var("X", "Marking"), Var("Y", "Money")]


def _grouped(union, elements, rng):
    """Random bracketing of ``elements`` built without canonicalization."""
    if not elements:
        return union.identity
    if len(elements) == 1:
        if rng.random() < 0.2:
            return App(union, (elements[0], union.identity))
        return elements[0]
    k = int(rng.integers(1, len(elements)))
    return App(union, (_grouped(union, elements[:k], rng), _grouped(union, elements[k:], rng)))


def _flat(union, term):
    if isinstance(term, App) and term.op == union:
        return [e for a in term.args for e in _flat(union, a)]
    if term == union.identity:
        return []
    return [term]


def _random_multiset(alphabet, rng, size):
    return [alphabet[int(i)] for i in rng.integers(0, len(alphabet), size)]


def test_ac_equality_agrees_with_multisets(vending):
    sig = vending.signature
    union = sig.symbol("__", 2, "[Marking]")
    alphabet = _alphabet(sig)
    rng = np.random.default_rng(11)
    agreed = Counter()
    for _ in range(1000):
        left = _random_multiset(alphabet, rng, int(rng.integers(0, 6)))
        if rng.random() < 0.5:
            right = [left[int(i)] for i in rng.permutation(len(left))]
        else:
            right = _random_multiset(alphabet, rng, int(rng.integers(0, 6)))
        t, u = _grouped(union, left, rng), _grouped(union, right, rng)
        same = Counter(e.key for e in _flat(union, t)) == Counter(e.key for e in _flat(union, u))
        assert b_equal(t, u) == same
        agreed[same] += 1
    assert agreed[True] > 100 and agreed[False] > 100


def test_canonical_form_is_a_fixpoint_of_every_bracketing(vending):
    sig = vending.signature
    union = sig.symbol("__", 2, "[Marking]")
    alphabet = _alphabet(sig)
    state = sig.symbol("<_>", 1, "[State]")
    rng = np.random.default_rng(12)
    for _ in range(1000):
        elements = _random_multiset(alphabet, rng, int(rng.integers(0, 7)))
        t = App(state, (_grouped(union, elements, rng),))
        shuffled = [elements[int(i)] for i in rng.permutation(len(elements))]
        u = App(state, (_grouped(union, shuffled, rng),))
        canonical = b_canonical(t)
        assert b_canonical(canonical) == canonical
        assert b_canonical(u) == canonical
        assert canonical == make(state, [make(union, elements)])
