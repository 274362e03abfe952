"""Distances computed on aggregate representations of elections.

These distances look only at the position matrix, the weighted majority
relation or the Borda score vector, so they are pseudometrics: different
elections may share an aggregate and sit at distance zero.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from ..core import OrdinalElection, borda_vector, emd, frequency_matrix, pairwise_matrix, position_matrix
from ..errors import BudgetExceededError, DomainError, SizeMismatchError
from ..matching import assignment_value, lexicographic_min_assignment

DEFAULT_PAIRWISE_MAX_CANDIDATES = 10


class ColumnNorm(str, Enum):
    EMD = "emd"
    L1 = "l1"

    @classmethod
    def parse(cls, value: "ColumnNorm | str") -> "ColumnNorm":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(f"unknown column norm {value!r}") from None


class MatrixForm(str, Enum):
    COUNTS = "counts"
    FREQUENCY = "frequency"

    @classmethod
    def parse(cls, value: "MatrixForm | str") -> "MatrixForm":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(f"unknown matrix form {value!r}") from None


def _same_candidates(e1: OrdinalElection, e2: OrdinalElection) -> None:
    if e1.num_candidates != e2.num_candidates:
        raise SizeMismatchError(
            f"elections have {e1.num_candidates} and {e2.num_candidates} candidates"
        )


def _aggregate_form(e1: OrdinalElection, e2: OrdinalElection, form: MatrixForm) -> None:
    if form is MatrixForm.COUNTS and e1.num_voters != e2.num_voters:
        raise SizeMismatchError(
            "count-form comparison needs equal numbers of voters "
            f"({e1.num_voters} vs {e2.num_voters}); use the frequency form"
        )


# ---------------------------------------------------------------------------
# Positionwise
# ---------------------------------------------------------------------------


def column_cost_matrix(x: np.ndarray, y: np.ndarray, norm: ColumnNorm | str = ColumnNorm.EMD) -> np.ndarray:
    """Cost of matching column ``c`` of ``x`` with column ``d`` of ``y``.

    Columns are candidate distributions over positions.  For EMD the cost is
    the L1 distance between column prefix sums (the last prefix is the common
    column total and contributes nothing).
    """
    norm = ColumnNorm.parse(norm)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise SizeMismatchError(f"matrices of shapes {x.shape} and {y.shape} cannot be compared")
    if norm is ColumnNorm.EMD:
        x = np.cumsum(x, axis=0)[:-1]
        y = np.cumsum(y, axis=0)[:-1]
    return np.abs(x[:, :, None] - y[:, None, :]).sum(axis=0)


def positionwise_matrix_distance(
    x: np.ndarray, y: np.ndarray, norm: ColumnNorm | str = ColumnNorm.EMD
) -> tuple[float, tuple[int, ...]]:
    """Positionwise distance between two position (or frequency) matrices.

    Returns:
        ``(distance, matching)`` where ``matching[c]`` is the column of ``y``
        assigned to column ``c`` of ``x``; the lexicographically smallest
        optimal matching is reported.
    """
    cost = column_cost_matrix(x, y, norm)
    value, perm = lexicographic_min_assignment(cost)
    return value, tuple(int(p) for p in perm)


def positionwise_distance(
    e1: OrdinalElection,
    e2: OrdinalElection,
    norm: ColumnNorm | str = ColumnNorm.EMD,
    form: MatrixForm | str = MatrixForm.FREQUENCY,
) -> float:
    """EMD- or L1-positionwise distance between two elections.

    Args:
        norm: ``"emd"`` (default) or ``"l1"`` column distance.
        form: ``"frequency"`` compares frequency matrices and accepts
            different numbers of voters; ``"counts"`` compares position
            matrices and requires equal numbers of voters.
    """
    _same_candidates(e1, e2)
    form = MatrixForm.parse(form)
    _aggregate_form(e1, e2, form)
    if form is MatrixForm.COUNTS:
        x, y = position_matrix(e1), position_matrix(e2)
    else:
        x, y = frequency_matrix(e1), frequency_matrix(e2)
    return assignment_value(column_cost_matrix(x, y, norm))


# ---------------------------------------------------------------------------
# Pairwise
# ---------------------------------------------------------------------------


def _fold(values: np.ndarray, totals: np.ndarray) -> np.ndarray:
    return np.minimum(values, totals - values)


class _PairwiseSearch:
    """Branch and bound over candidate bijections for the pairwise distance.

    The objective sums ``|A[c, d] - B[s(c), s(d)]|`` over ordered pairs.  For
    a partial bijection the pairs with both ends mapped are exact; pairs with
    one mapped end are bounded by an assignment of the unmapped candidates,
    and pairs with no mapped end by matching sorted folded entries (valid
    because ``A[c, d] + A[d, c]`` is the same constant in both matrices).
    """

    def __init__(self, a: np.ndarray, b: np.ndarray, node_budget: int | None):
        self.a, self.b = a, b
        self.m = a.shape[0]
        self.total = a[0, 1] + a[1, 0] if self.m > 1 else 0.0
        self.node_budget = node_budget
        self.nodes = 0
        spread = np.abs(a - self.total / 2).sum(axis=1)
        self.order = [int(c) for c in np.argsort(-spread, kind="stable")]

    def objective(self, sigma) -> float:
        sigma = np.asarray(sigma)
        permuted = self.b[np.ix_(sigma, sigma)]
        diff = np.abs(self.a - permuted)
        np.fill_diagonal(diff, 0.0)
        return float(diff.sum())

    def _bound(self, assigned, free1, free2) -> float:
        bound = 0.0
        if assigned and free1:
            prev1 = [c for c, _ in assigned]
            prev2 = [x for _, x in assigned]
            out1 = self.a[np.ix_(prev1, free1)]
            out2 = self.b[np.ix_(prev2, free2)]
            in1 = self.a[np.ix_(free1, prev1)].T
            in2 = self.b[np.ix_(free2, prev2)].T
            mixed = np.abs(out1[:, :, None] - out2[:, None, :]).sum(axis=0)
            mixed += np.abs(in1[:, :, None] - in2[:, None, :]).sum(axis=0)
            bound += assignment_value(mixed)
        if len(free1) >= 2:
            iu = np.triu_indices(len(free1), k=1)
            left = np.sort(_fold(self.a[np.ix_(free1, free1)][iu], self.total))
            right = np.sort(_fold(self.b[np.ix_(free2, free2)][iu], self.total))
            bound += 2.0 * float(np.abs(left - right).sum())
        return bound

    def _exact_part(self, assigned, c, x) -> float:
        if not assigned:
            return 0.0
        prev1 = [d for d, _ in assigned]
        prev2 = [y for _, y in assigned]
        return float(
            np.abs(self.a[c, prev1] - self.b[x, prev2]).sum() + np.abs(self.a[prev1, c] - self.b[prev2, x]).sum()
        )

    def _initial(self) -> tuple[float, tuple[int, ...]]:
        # match rows by their sorted out-degree profile, then improve by swaps
        rows1 = np.sort(self.a, axis=1)
        rows2 = np.sort(self.b, axis=1)
        cost = np.abs(rows1[:, None, :] - rows2[None, :, :]).sum(axis=2)
        _, perm = lexicographic_min_assignment(cost)
        sigma = [int(p) for p in perm]
        value = self.objective(sigma)
        improved = True
        while improved and value > 0:
            improved = False
            for i in range(self.m):
                for j in range(i + 1, self.m):
                    trial = list(sigma)
                    trial[i], trial[j] = trial[j], trial[i]
                    trial_value = self.objective(trial)
                    if trial_value < value - 1e-12:
                        value, sigma, improved = trial_value, trial, True
        return value, tuple(sigma)

    def solve(self) -> tuple[float, tuple[int, ...]]:
        self.best_value, self.best_sigma = self._initial()
        if self.best_value > self._bound([], list(self.order), list(range(self.m))) + 1e-9:
            self._dfs([], 0.0, set(range(self.m)))
        return self.best_value, self.best_sigma

    def _dfs(self, assigned, exact, free2) -> None:
        self.nodes += 1
        if self.node_budget is not None and self.nodes > self.node_budget:
            raise BudgetExceededError(f"pairwise search exceeded {self.node_budget} nodes")
        depth = len(assigned)
        if depth == self.m:
            if exact < self.best_value - 1e-9:
                sigma = [0] * self.m
                for c, x in assigned:
                    sigma[c] = x
                self.best_value, self.best_sigma = exact, tuple(sigma)
            return
        c = self.order[depth]
        rest1 = self.order[depth + 1 :]
        children = []
        for x in sorted(free2):
            value = exact + self._exact_part(assigned, c, x)
            new_assigned = assigned + [(c, x)]
            bound = value + self._bound(new_assigned, rest1, sorted(free2 - {x}))
            children.append((bound, x, value))
        children.sort()
        for bound, x, value in children:
            if bound >= self.best_value - 1e-9:
                break
            self._dfs(assigned + [(c, x)], value, free2 - {x})
            if self.best_value <= 1e-12:
                return


def pairwise_matrix_distance(
    a: np.ndarray,
    b: np.ndarray,
    *,
    max_candidates: int = DEFAULT_PAIRWISE_MAX_CANDIDATES,
    node_budget: int | None = None,
) -> tuple[float, tuple[int, ...]]:
    """Pairwise distance between two weighted majority relations.

    Diagonal entries are ignored.  ``a[c, d] + a[d, c]`` must be the same
    constant for every pair in both matrices (true for count matrices of
    elections with equal numbers of voters and for fraction matrices).

    Returns:
        ``(distance, bijection)`` with ``bijection[c]`` the candidate of the
        second relation matched to ``c``.

    Raises:
        BudgetExceededError: more than ``max_candidates`` candidates, or the
            node budget ran out.
    """
    a = np.asarray(a, dtype=float).copy()
    b = np.asarray(b, dtype=float).copy()
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise SizeMismatchError(f"relations of shapes {a.shape} and {b.shape} cannot be compared")
    m = a.shape[0]
    if m > max_candidates:
        raise BudgetExceededError(f"pairwise distance search capped at {max_candidates} candidates, got {m}")
    np.fill_diagonal(a, 0.0)
    np.fill_diagonal(b, 0.0)
    if m <= 1:
        return 0.0, tuple(range(m))
    search = _PairwiseSearch(a, b, node_budget)
    return search.solve()


def pairwise_distance(
    e1: OrdinalElection,
    e2: OrdinalElection,
    normalized: bool = False,
    *,
    max_candidates: int = DEFAULT_PAIRWISE_MAX_CANDIDATES,
    node_budget: int | None = None,
) -> float:
    """L1-pairwise distance, summed over ordered candidate pairs.

    Args:
        normalized: compare fractions of voters instead of counts; required
            when the elections have different numbers of voters.
    """
    _same_candidates(e1, e2)
    _aggregate_form(e1, e2, MatrixForm.FREQUENCY if normalized else MatrixForm.COUNTS)
    a = pairwise_matrix(e1, normalized=normalized)
    b = pairwise_matrix(e2, normalized=normalized)
    value, _ = pairwise_matrix_distance(a, b, max_candidates=max_candidates, node_budget=node_budget)
    return value


# ---------------------------------------------------------------------------
# Bordawise
# ---------------------------------------------------------------------------


def bordawise_vector_distance(x, y) -> float:
    """EMD between two score vectors after sorting each in non-increasing order."""
    x = np.sort(np.asarray(x, dtype=float))[::-1]
    y = np.sort(np.asarray(y, dtype=float))[::-1]
    if x.shape != y.shape:
        raise SizeMismatchError(f"score vectors of lengths {x.size} and {y.size}")
    return emd(x, y)


def bordawise_distance(e1: OrdinalElection, e2: OrdinalElection, normalized: bool = False) -> float:
    """EMD-Bordawise distance; ``normalized`` divides each score vector by its number of voters."""
    _same_candidates(e1, e2)
    _aggregate_form(e1, e2, MatrixForm.FREQUENCY if normalized else MatrixForm.COUNTS)
    x = borda_vector(e1).astype(float)
    y = borda_vector(e2).astype(float)
    if normalized:
        x, y = x / e1.num_voters, y / e2.num_voters
    return bordawise_vector_distance(x, y)
