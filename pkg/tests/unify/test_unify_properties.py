import itertools

import numpy as np
import pytest

from canarrow.corpus import CORPUS_DIR
from canarrow.parsing import load_theory, parse_term

SORTS = ["Coin", "Money", "Marking"]
GROUND = {
    "Coin": ["$", "q"],
    "Money": ["empty", "$", "q", "$ $", "$ q", "q q"],
    "Marking": ["empty", "$", "q", "c", "a"],
}


@pytest.fixture(scope="module")
def vending():
    return load_theory(CORPUS_DIR / "vending.maude")


def _side(rng, variables):
    elements = [str(e) for e in rng.choice(["$", "q", "c", "a"], int(rng.integers(0, 3)))]
    return " ".join(elements + variables) or "empty"


def _random_problem(rng):
    """Two collections sharing at most three variables, each of a random sort."""
    names = ["X", "Y", "Z"][: int(rng.integers(1, 4))]
    left, right = [], []
    for name in names:
        var = f"{name}:{SORTS[int(rng.integers(0, 3))]}"
        where = rng.random()
        if where < 0.4:
            left.append(var)
        elif where < 0.8:
            right.append(var)
        else:
            left.append(var)
            right.append(var)
    return _side(rng, left), _side(rng, right)


def _ground_solutions(theory, t, u, xs):
    from canarrow.kernel import apply

    universes = [[parse_term(theory, g, "Marking") for g in GROUND[x.sort]] for x in xs]
    for images in itertools.product(*universes):
        g = dict(zip(xs, images, strict=True))
        if apply(t, g) == apply(u, g):
            yield g


def test_unifiers_are_complete_and_minimal(vending):
    from canarrow.kernel import apply, ordered_variables
    from canarrow.unify import instance_of, subsumes, unify

    sig = vending.signature
    rng = np.random.default_rng(21)
    solved = 0
    for _ in range(300):
        left, right = _random_problem(rng)
        t, u = parse_term(vending, left, "Marking"), parse_term(vending, right, "Marking")
        xs = ordered_variables(t, u)
        result = list(unify(sig, t, u))
        for sigma in result:
            assert apply(t, sigma) == apply(u, sigma), (left, right, sigma)
        for sigma, theta in itertools.permutations(result, 2):
            assert not subsumes(sig, sigma, theta, xs), (left, right)
        for g in _ground_solutions(vending, t, u, xs):
            ground = [g[x] for x in xs]
            assert any(
                instance_of(sig, [sigma.image(x) for x in xs], ground) for sigma in result
            ), (left, right, g)
            solved += 1
    assert solved > 50
