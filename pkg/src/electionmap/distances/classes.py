"""Exhaustive counting of elections that are indistinguishable under a distance.

Two elections fall into the same class when their distance is zero.  Each
distance has a canonical form that is equal exactly for such elections:

* ``anec``: the multiset of votes up to renaming candidates, i.e. the
  smallest sorted vote-index tuple over all renamings;
* ``positionwise``: the position matrix with columns sorted (zero EMD or L1
  between columns means equal columns);
* ``pairwise``: the weighted majority relation under the renaming that
  makes its flattened form smallest;
* ``bordawise``: the sorted Borda score vector.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from ..errors import BudgetExceededError, DomainError

CLASS_METRICS = ("anec", "positionwise", "pairwise", "bordawise")
MAX_ELECTIONS = 2_000_000


def _orders(m: int) -> list[tuple[int, ...]]:
    return list(itertools.permutations(range(m)))


def _anec_codes(m: int, n: int) -> np.ndarray:
    """Canonical code of every election, one row per multiset of votes."""
    orders = _orders(m)
    index = {order: i for i, order in enumerate(orders)}
    k = len(orders)
    # action of each renaming on vote indices
    action = np.array(
        [[index[tuple(sigma[c] for c in order)] for order in orders] for sigma in itertools.permutations(range(m))],
        dtype=np.int64,
    )
    multisets = np.array(list(itertools.combinations_with_replacement(range(k), n)), dtype=np.int64)
    weights = k ** np.arange(n - 1, -1, -1, dtype=np.int64)
    best = None
    for row in action:
        relabeled = np.sort(row[multisets], axis=1)
        codes = relabeled @ weights
        best = codes if best is None else np.minimum(best, codes)
    return np.unique(best)


def _decode(code: int, k: int, n: int) -> list[int]:
    digits = []
    for _ in range(n):
        code, digit = divmod(code, k)
        digits.append(digit)
    return digits[::-1]


def _position_key(votes: np.ndarray, m: int) -> tuple:
    counts = np.zeros((m, m), dtype=np.int64)
    for vote in votes:
        counts[np.arange(m), vote] += 1
    columns = sorted(tuple(col) for col in counts.T)
    return tuple(columns)


def _pairwise_key(votes: np.ndarray, m: int, renamings: list[np.ndarray]) -> tuple:
    positions = np.argsort(votes, axis=1)
    wins = (positions[:, :, None] < positions[:, None, :]).sum(axis=0)
    return min(tuple(wins[np.ix_(sigma, sigma)].ravel()) for sigma in renamings)


def _borda_key(votes: np.ndarray, m: int) -> tuple:
    positions = np.argsort(votes, axis=1)
    return tuple(sorted((m - 1 - positions).sum(axis=0)))


def count_equivalence_classes(m: int, n: int, metric: str = "anec", max_elections: int = MAX_ELECTIONS) -> int:
    """Number of classes of ``m``-candidate, ``n``-voter elections at mutual distance zero.

    Args:
        metric: one of ``"anec"``, ``"positionwise"``, ``"pairwise"``, ``"bordawise"``.
        max_elections: cap on the number of vote multisets enumerated.

    Raises:
        BudgetExceededError: the enumeration would exceed ``max_elections``.
    """
    metric = metric.lower()
    if metric not in CLASS_METRICS:
        raise DomainError(f"unknown metric {metric!r}; expected one of {CLASS_METRICS}")
    if m < 1 or n < 1:
        raise DomainError("need at least one candidate and one voter")
    k = math.factorial(m)
    size = math.comb(k + n - 1, n)
    if size > max_elections:
        raise BudgetExceededError(f"{size} vote multisets exceed the enumeration cap {max_elections}")
    codes = _anec_codes(m, n)
    if metric == "anec":
        return int(codes.size)
    orders = np.array(_orders(m), dtype=np.int64)
    renamings = [np.array(s) for s in itertools.permutations(range(m))]
    keys = set()
    for code in codes:
        votes = orders[_decode(int(code), k, n)]
        if metric == "positionwise":
            keys.add(_position_key(votes, m))
        elif metric == "pairwise":
            keys.add(_pairwise_key(votes, m, renamings))
        else:
            keys.add(_borda_key(votes, m))
    return len(keys)
