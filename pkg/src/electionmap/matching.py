"""Assignment and bipartite matching helpers.

The minimum-cost assignment itself is delegated to
:func:`scipy.optimize.linear_sum_assignment`; this module adds the
deterministic tie-breaking the rest of the package relies on.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

ASSIGNMENT_TOLERANCE = 1e-9


def min_cost_assignment(cost) -> tuple[float, np.ndarray]:
    """Solve a square assignment problem.

    Returns:
        ``(value, perm)`` where row ``i`` is assigned column ``perm[i]``.
    """
    cost = np.asarray(cost, dtype=float)
    if cost.size == 0:
        return 0.0, np.zeros(0, dtype=np.int64)
    rows, cols = linear_sum_assignment(cost)
    perm = np.empty(cost.shape[0], dtype=np.int64)
    perm[rows] = cols
    return float(cost[rows, cols].sum()), perm


def assignment_value(cost) -> float:
    cost = np.asarray(cost, dtype=float)
    if cost.size == 0:
        return 0.0
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].sum())


def lexicographic_min_assignment(cost, tolerance: float = ASSIGNMENT_TOLERANCE) -> tuple[float, np.ndarray]:
    """Optimal assignment whose column sequence ``perm[0], perm[1], ...`` is lexicographically smallest.

    Rows are fixed one at a time to the smallest column that still admits an
    optimal completion.  Costs are compared with an absolute ``tolerance``
    (integral costs are therefore compared exactly).
    """
    cost = np.asarray(cost, dtype=float)
    k = cost.shape[0]
    optimum, perm = min_cost_assignment(cost)
    fixed_cost = 0.0
    free_rows = list(range(k))
    free_cols = list(range(k))
    result = np.empty(k, dtype=np.int64)
    for row in range(k):
        free_rows.remove(row)
        chosen = None
        for col in sorted(free_cols):
            rest_cols = [c for c in free_cols if c != col]
            rest = assignment_value(cost[np.ix_(free_rows, rest_cols)]) if free_rows else 0.0
            if fixed_cost + cost[row, col] + rest <= optimum + tolerance:
                chosen = col
                break
        if chosen is None:  # numerical safety net: fall back to the solver's choice
            chosen = int(perm[row]) if int(perm[row]) in free_cols else min(free_cols)
        result[row] = chosen
        fixed_cost += cost[row, chosen]
        free_cols.remove(chosen)
    return optimum, result


def max_matching(adjacency) -> tuple[int, np.ndarray]:
    """Maximum-cardinality matching in a bipartite graph.

    Args:
        adjacency: boolean ``(r, c)`` matrix; true entries are edges.

    Returns:
        ``(size, match)`` with ``match[i]`` the column matched to row ``i`` or -1.
    """
    adjacency = np.asarray(adjacency, dtype=bool)
    if adjacency.size == 0 or not adjacency.any():
        return 0, np.full(adjacency.shape[0], -1, dtype=np.int64)
    match = maximum_bipartite_matching(csr_matrix(adjacency.astype(np.int8)), perm_type="column")
    match = np.asarray(match, dtype=np.int64)
    return int((match >= 0).sum()), match
