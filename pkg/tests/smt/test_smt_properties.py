import numpy as np
import pytest

from canarrow.parsing import parse_theory, parse_term

ARITH = """
mod ARITH is
  protecting REAL-INTEGER .
endm
"""

NAMES = ["X", "Y", "Z"]
RELATIONS = {
    ">": np.greater,
    ">=": np.greater_equal,
    "<": np.less,
    "<=": np.less_equal,
    "===": np.equal,
}
# every point with coordinates in [-5, 5] and denominators dividing 4
GRID = np.stack(np.meshgrid(*[np.arange(-20, 21) / 4] * 3, indexing="ij"), axis=-1).reshape(-1, 3)


@pytest.fixture(scope="module")
def arith():
    return parse_theory(ARITH)


def _side(coefficients, constant):
    terms = [f"{c}/1 * {n}:Real" for c, n in zip(coefficients, NAMES, strict=True) if c]
    if constant:
        terms.append(f"{constant}/1")
    return " + ".join(terms) or "0/1"


def _atom(a, b, relation):
    """``a . x relation b`` with every coefficient moved to the side where it is positive."""
    left = _side(np.where(a > 0, a, 0), max(-b, 0))
    right = _side(np.where(a < 0, -a, 0), max(b, 0))
    return f"({left} {relation} {right})"


OPPOSITE = {">": "<=", ">=": "<", "<": ">=", "<=": ">", "===": ">"}


def _random_system(rng):
    """One to four random atoms; a quarter of the systems also negate their first atom."""
    rows = int(rng.integers(1, 5))
    a = rng.integers(-3, 4, size=(rows, 3))
    a[~a.any(axis=1), 0] = 1
    b = rng.integers(-6, 7, size=rows)
    picks = rng.choice(len(RELATIONS), rows, p=[0.25, 0.25, 0.2, 0.2, 0.1])
    relations = [list(RELATIONS)[int(i)] for i in picks]
    if rng.random() < 0.25:
        a = np.vstack([a, a[:1]])
        b = np.append(b, b[0])
        relations.append(OPPOSITE[relations[0]])
    return a, b, relations


def _grid_points(a, b, relations):
    values = GRID @ a.T
    inside = np.ones(len(GRID), dtype=bool)
    for j, relation in enumerate(relations):
        inside &= RELATIONS[relation](values[:, j], b[j])
    return GRID[inside]


def _holds(a, b, relations, point):
    from sympy import Rational

    for row, rhs, relation in zip(a, b, relations, strict=True):
        value = sum(Rational(int(c)) * v for c, v in zip(row, point, strict=True))
        if not {
            ">": value > rhs,
            ">=": value >= rhs,
            "<": value < rhs,
            "<=": value <= rhs,
            "===": value == rhs,
        }[relation]:
            return False
    return True


def test_builtin_solver_agrees_with_grid(arith):
    """Grid points prove satisfiability; models of sat answers are checked exactly."""
    from sympy import Rational

    from canarrow.smt import check_sat

    rng = np.random.default_rng(41)
    verdicts = {"sat": 0, "unsat": 0}
    for _ in range(500):
        a, b, relations = _random_system(rng)
        box = [
            _atom(np.eye(3, dtype=int)[i] * sign, 5, "<=") for i in range(3) for sign in (1, -1)
        ]
        atoms = [_atom(row, int(rhs), rel) for row, rhs, rel in zip(a, b, relations, strict=True)]
        formula = parse_term(arith, " and ".join(atoms + box), "Boolean")
        result = check_sat(formula)
        assert result.verdict in verdicts
        verdicts[result.verdict] += 1
        on_grid = len(_grid_points(a, b, relations)) > 0
        if on_grid:
            assert result.sat, atoms
        if result.sat:
            point = [Rational(result.model.get(n, 0)) for n in NAMES]
            assert all(abs(p) <= 5 for p in point)
            assert _holds(a, b, relations, point), (atoms, point)
    assert verdicts["sat"] > 100 and verdicts["unsat"] > 100
