"""Minimal non-negative solutions of one homogeneous linear Diophantine equation.

``sum_i a_i x_i = sum_j b_j y_j`` is solved by bounded enumeration: each unknown is bounded by
the largest coefficient of the opposite side (or by 1 for positions holding non-variable terms),
after which non-minimal solutions are filtered out.
"""

import itertools

import numpy as np


def _side(coeffs: list[int], bounds: list[int]) -> tuple[np.ndarray, np.ndarray]:
    if not coeffs:
        return np.zeros((1, 0), dtype=np.int64), np.zeros(1, dtype=np.int64)
    grid = np.array(list(itertools.product(*(range(b + 1) for b in bounds))), dtype=np.int64)
    return grid, grid @ np.asarray(coeffs, dtype=np.int64)


def minimal_solutions(
    lhs: list[int],
    rhs: list[int],
    lhs_bounds: list[int] | None = None,
    rhs_bounds: list[int] | None = None,
) -> np.ndarray:
    """Basis of ``lhs . x = rhs . y`` as rows ``(x, y)`` of an integer array.

    Args:
        lhs: Coefficients of the left unknowns.
        rhs: Coefficients of the right unknowns.
        lhs_bounds: Optional per-unknown upper bounds of ``x``.
        rhs_bounds: Optional per-unknown upper bounds of ``y``.

    Returns:
        np.ndarray: One minimal solution per row, ordered by total size.
    """
    max_l = max(lhs, default=0)
    max_r = max(rhs, default=0)
    lb = lhs_bounds if lhs_bounds is not None else [max_r] * len(lhs)
    rb = rhs_bounds if rhs_bounds is not None else [max_l] * len(rhs)
    xs, xsum = _side(lhs, lb)
    ys, ysum = _side(rhs, rb)

    rows = []
    by_sum: dict[int, list[int]] = {}
    for j, s in enumerate(ysum.tolist()):
        by_sum.setdefault(s, []).append(j)
    for i, s in enumerate(xsum.tolist()):
        if s == 0:
            continue
        for j in by_sum.get(s, ()):
            rows.append(np.concatenate([xs[i], ys[j]]))
    if not rows:
        return np.zeros((0, len(lhs) + len(rhs)), dtype=np.int64)

    cands = np.stack(rows)
    cands = cands[np.argsort(cands.sum(axis=1), kind="stable")]
    kept: list[np.ndarray] = []
    for row in cands:
        if kept and np.any(np.all(np.stack(kept) <= row, axis=1)):
            continue
        kept.append(row)
    return np.stack(kept)
