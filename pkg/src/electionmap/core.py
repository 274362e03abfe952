"""Election types, aggregate representations and small numeric primitives.

Candidates and voters are plain integer indices everywhere in the library;
human-readable names only appear at the I/O boundary.  Count-form matrices use
exact integer arithmetic, frequency forms are floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import DomainError, SizeMismatchError, UndefinedCorrelationError

#: A complete strict ranking: candidate indices, most preferred first.
PreferenceOrder = tuple[int, ...]

SUM_TOLERANCE = 1e-9


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def validate_order(order: Sequence[int], m: int) -> PreferenceOrder:
    """Return ``order`` as a tuple after checking it is a permutation of ``0..m-1``."""
    ranking = tuple(int(c) for c in order)
    if len(ranking) != m or sorted(ranking) != list(range(m)):
        raise DomainError(f"{ranking!r} is not a permutation of 0..{m - 1}")
    return ranking


@dataclass(frozen=True, eq=False)
class OrdinalElection:
    """An election with complete strict preference orders.

    Attributes:
        num_candidates: number of candidates ``m``.
        votes: integer array of shape ``(n, m)``; row ``i`` lists the candidates
            in the order of voter ``i`` (best first).  The array is read-only.
    """

    num_candidates: int
    votes: np.ndarray = field(repr=False)

    def __post_init__(self):
        votes = np.array(self.votes, dtype=np.int64, copy=True)
        m = int(self.num_candidates)
        if m < 1:
            raise DomainError("an election needs at least one candidate")
        if votes.ndim != 2 or votes.shape[0] < 1 or votes.shape[1] != m:
            raise DomainError(f"votes must have shape (n >= 1, {m}), got {votes.shape}")
        expected = np.arange(m)
        if not np.array_equal(np.sort(votes, axis=1), np.broadcast_to(expected, votes.shape)):
            raise DomainError("every vote must be a permutation of the candidates")
        object.__setattr__(self, "num_candidates", m)
        object.__setattr__(self, "votes", _readonly(votes))

    @classmethod
    def from_votes(cls, votes: Iterable[Sequence[int]], num_candidates: int | None = None) -> "OrdinalElection":
        rows = [list(v) for v in votes]
        if not rows:
            raise DomainError("an election needs at least one vote")
        m = len(rows[0]) if num_candidates is None else num_candidates
        return cls(m, np.array(rows, dtype=np.int64).reshape(len(rows), m))

    @property
    def num_voters(self) -> int:
        return int(self.votes.shape[0])

    @property
    def shape(self) -> tuple[int, int]:
        """``(m, n)``: candidates first, as in the usual ``m x n`` notation."""
        return self.num_candidates, self.num_voters

    @cached_property
    def positions(self) -> np.ndarray:
        """Array ``pos[i, c]``: 0-based position of candidate ``c`` in vote ``i``."""
        n, m = self.votes.shape
        pos = np.empty((n, m), dtype=np.int64)
        pos[np.arange(n)[:, None], self.votes] = np.arange(m)[None, :]
        return _readonly(pos)

    def vote(self, i: int) -> PreferenceOrder:
        return tuple(int(c) for c in self.votes[i])

    def vote_list(self) -> list[PreferenceOrder]:
        return [tuple(int(c) for c in row) for row in self.votes]

    def relabel(self, mapping: Sequence[int]) -> "OrdinalElection":
        """Rename candidate ``c`` to ``mapping[c]`` in every vote."""
        perm = np.asarray(validate_order(mapping, self.num_candidates))
        return OrdinalElection(self.num_candidates, perm[self.votes])

    def reorder_voters(self, order: Sequence[int]) -> "OrdinalElection":
        idx = np.asarray(validate_order(order, self.num_voters))
        return OrdinalElection(self.num_candidates, self.votes[idx])

    def restrict(self, candidates: Sequence[int]) -> "OrdinalElection":
        """Drop all candidates not in ``candidates`` and renumber the rest ``0..k-1``.

        The new index of a kept candidate is its rank in ``sorted(candidates)``.
        """
        keep = sorted(set(int(c) for c in candidates))
        if not keep:
            raise DomainError("cannot restrict to an empty candidate set")
        new_index = {c: i for i, c in enumerate(keep)}
        rows = [[new_index[int(c)] for c in row if int(c) in new_index] for row in self.votes]
        return OrdinalElection(len(keep), np.array(rows, dtype=np.int64))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OrdinalElection):
            return NotImplemented
        return self.num_candidates == other.num_candidates and np.array_equal(self.votes, other.votes)

    def __hash__(self) -> int:
        return hash((self.num_candidates, self.votes.tobytes()))


@dataclass(frozen=True, eq=False)
class ApprovalElection:
    """An election in which each voter approves a (possibly empty) subset of candidates."""

    num_candidates: int
    votes: tuple[frozenset[int], ...]

    def __post_init__(self):
        m = int(self.num_candidates)
        if m < 1:
            raise DomainError("an election needs at least one candidate")
        ballots = tuple(frozenset(int(c) for c in ballot) for ballot in self.votes)
        for ballot in ballots:
            if any(c < 0 or c >= m for c in ballot):
                raise DomainError(f"ballot {sorted(ballot)} uses a candidate outside 0..{m - 1}")
        object.__setattr__(self, "num_candidates", m)
        object.__setattr__(self, "votes", ballots)

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "ApprovalElection":
        matrix = np.asarray(matrix, dtype=bool)
        return cls(matrix.shape[1], tuple(frozenset(np.flatnonzero(row).tolist()) for row in matrix))

    @property
    def num_voters(self) -> int:
        return len(self.votes)

    @cached_property
    def matrix(self) -> np.ndarray:
        """Boolean ``(n, m)`` incidence matrix; entry ``(i, c)`` is true iff voter ``i`` approves ``c``."""
        mat = np.zeros((self.num_voters, self.num_candidates), dtype=bool)
        for i, ballot in enumerate(self.votes):
            mat[i, list(ballot)] = True
        return _readonly(mat)

    def approval_scores(self) -> np.ndarray:
        return self.matrix.sum(axis=0).astype(np.int64)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ApprovalElection):
            return NotImplemented
        return self.num_candidates == other.num_candidates and self.votes == other.votes

    def __hash__(self) -> int:
        return hash((self.num_candidates, self.votes))


# ---------------------------------------------------------------------------
# Aggregate representations
# ---------------------------------------------------------------------------


def position_matrix(election: OrdinalElection) -> np.ndarray:
    """Count matrix ``P[i, c]`` = number of voters ranking candidate ``c`` at position ``i``."""
    m = election.num_candidates
    counts = np.zeros((m, m), dtype=np.int64)
    np.add.at(counts, (np.broadcast_to(np.arange(m), election.votes.shape), election.votes), 1)
    return counts


def frequency_matrix(election: OrdinalElection) -> np.ndarray:
    """Position matrix divided by ``n``; bistochastic."""
    return position_matrix(election) / election.num_voters


def pairwise_matrix(election: OrdinalElection, normalized: bool = False) -> np.ndarray:
    """Weighted majority relation.

    ``M[c, d]`` is the number (or, if ``normalized``, the fraction) of voters
    preferring ``c`` to ``d``.  The diagonal is undefined and stored as 0.
    """
    pos = election.positions
    wins = (pos[:, :, None] < pos[:, None, :]).sum(axis=0).astype(np.int64)
    if normalized:
        return wins / election.num_voters
    return wins


def borda_vector(election: OrdinalElection) -> np.ndarray:
    """Borda scores: a candidate at 0-based position ``p`` receives ``m - 1 - p`` points per vote."""
    m = election.num_candidates
    return (m - 1 - election.positions).sum(axis=0).astype(np.int64)


# ---------------------------------------------------------------------------
# Vector primitives
# ---------------------------------------------------------------------------


def _as_vectors(x, y) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(x, dtype=float).ravel()
    b = np.asarray(y, dtype=float).ravel()
    if a.shape != b.shape:
        raise SizeMismatchError(f"vectors have different lengths {a.size} and {b.size}")
    return a, b


def prefix_sums(x) -> np.ndarray:
    return np.cumsum(np.asarray(x, dtype=float))


def emd(x, y) -> float:
    """Earth mover's distance between two equal-mass nonnegative vectors on a line.

    Moving one unit of mass between adjacent entries costs 1, so the distance
    equals the l1 distance of the prefix sums.
    """
    a, b = _as_vectors(x, y)
    if (a < -SUM_TOLERANCE).any() or (b < -SUM_TOLERANCE).any():
        raise DomainError("emd is defined for nonnegative vectors")
    scale = max(1.0, abs(a.sum()), abs(b.sum()))
    if abs(a.sum() - b.sum()) > SUM_TOLERANCE * scale:
        raise DomainError(f"emd needs equal sums, got {a.sum()} and {b.sum()}")
    return float(np.abs(np.cumsum(a - b)[:-1]).sum())


def l1(x, y) -> float:
    a, b = _as_vectors(x, y)
    return float(np.abs(a - b).sum())


def pcc(x, y) -> float:
    """Pearson correlation coefficient of two equally long samples."""
    a, b = _as_vectors(x, y)
    if a.size < 2:
        raise UndefinedCorrelationError("correlation needs at least two observations")
    da = a - a.mean()
    db = b - b.mean()
    va = float(np.dot(da, da))
    vb = float(np.dot(db, db))
    if va == 0.0 or vb == 0.0:
        raise UndefinedCorrelationError("correlation is undefined for a constant vector")
    return float(np.clip(np.dot(da, db) / np.sqrt(va * vb), -1.0, 1.0))


# ---------------------------------------------------------------------------
# Position matrix realization
# ---------------------------------------------------------------------------


def realize_from_position_matrix(counts) -> OrdinalElection:
    """Build an election whose position matrix is ``counts``.

    Uses a Birkhoff decomposition: repeatedly pick a permutation inside the
    support (a perfect matching of positions to candidates), add it with
    multiplicity equal to its smallest entry and subtract.  Each extraction
    moves to a strictly smaller face of the Birkhoff polytope, so at most
    ``m^2 - 2m + 2`` distinct orders appear.
    """
    matrix = np.array(counts, dtype=np.int64, copy=True)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 1:
        raise DomainError("a position matrix must be square and nonempty")
    if (matrix < 0).any():
        raise DomainError("a position matrix has nonnegative entries")
    n = int(matrix[0].sum())
    if n < 1 or (matrix.sum(axis=0) != n).any() or (matrix.sum(axis=1) != n).any():
        raise DomainError("rows and columns of a position matrix must all sum to the same n >= 1")
    m = matrix.shape[0]
    big = float(n + 1) * m
    votes: list[np.ndarray] = []
    while matrix.any():
        cost = np.where(matrix > 0, -matrix.astype(float), big)
        rows, cols = linear_sum_assignment(cost)
        weights = matrix[rows, cols]
        if (weights <= 0).any():
            raise DomainError("matrix support has no perfect matching; not a scaled bistochastic matrix")
        take = int(weights.min())
        vote = np.empty(m, dtype=np.int64)
        vote[rows] = cols
        votes.extend([vote] * take)
        matrix[rows, cols] -= take
    return OrdinalElection(m, np.array(votes))


# ---------------------------------------------------------------------------
# Distance matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Symmetric matrix of pairwise distances over a labelled dataset."""

    labels: tuple[str, ...]
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        labels = tuple(str(label) for label in self.labels)
        values = np.array(self.values, dtype=float, copy=True)
        k = len(labels)
        if len(set(labels)) != k:
            raise DomainError("distance matrix labels must be unique")
        if values.shape != (k, k):
            raise DomainError(f"expected a {k}x{k} matrix, got {values.shape}")
        if not np.isfinite(values).all():
            raise DomainError("distance matrix entries must be finite")
        if (values < 0).any():
            raise DomainError("distances are nonnegative")
        if not np.allclose(values, values.T, rtol=0, atol=1e-9):
            raise DomainError("distance matrix must be symmetric")
        if np.any(np.diag(values) != 0):
            raise DomainError("distance matrix must have a zero diagonal")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "values", _readonly(values))

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def get(self, a: str, b: str) -> float:
        return float(self.values[self.index(a), self.index(b)])

    def condensed(self) -> np.ndarray:
        """Upper-triangle entries in row-major order."""
        iu = np.triu_indices(len(self.labels), k=1)
        return self.values[iu]
