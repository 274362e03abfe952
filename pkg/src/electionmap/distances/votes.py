"""Distances between individual preference orders."""

from __future__ import annotations

from enum import Enum
from typing import Sequence

import numpy as np

from ..errors import DomainError, SizeMismatchError


class VoteMetric(str, Enum):
    SWAP = "swap"
    SPEARMAN = "spearman"
    DISCRETE = "discrete"

    @classmethod
    def parse(cls, value: "VoteMetric | str") -> "VoteMetric":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(f"unknown vote metric {value!r}") from None


def _positions(order: Sequence[int]) -> np.ndarray:
    order = np.asarray(order, dtype=np.int64)
    pos = np.empty(order.size, dtype=np.int64)
    pos[order] = np.arange(order.size)
    return pos


def _check_pair(u: Sequence[int], v: Sequence[int]) -> None:
    if len(u) != len(v):
        raise SizeMismatchError(f"votes have different lengths {len(u)} and {len(v)}")
    if sorted(u) != list(range(len(u))) or sorted(v) != list(range(len(v))):
        raise DomainError("votes must be permutations of 0..m-1")


def swap_distance(u: Sequence[int], v: Sequence[int]) -> int:
    """Number of candidate pairs ordered differently by ``u`` and ``v`` (Kendall tau)."""
    _check_pair(u, v)
    pu, pv = _positions(u), _positions(v)
    before_u = pu[:, None] < pu[None, :]
    before_v = pv[:, None] < pv[None, :]
    return int(np.triu(before_u != before_v, k=1).sum())


def spearman_distance(u: Sequence[int], v: Sequence[int]) -> int:
    """Total displacement of candidates between the two orders (Spearman footrule)."""
    _check_pair(u, v)
    return int(np.abs(_positions(u) - _positions(v)).sum())


def discrete_distance(u: Sequence[int], v: Sequence[int]) -> int:
    _check_pair(u, v)
    return int(tuple(u) != tuple(v))


_SINGLE = {
    VoteMetric.SWAP: swap_distance,
    VoteMetric.SPEARMAN: spearman_distance,
    VoteMetric.DISCRETE: discrete_distance,
}


def vote_distance(metric: VoteMetric | str, u: Sequence[int], v: Sequence[int]) -> int:
    return _SINGLE[VoteMetric.parse(metric)](u, v)


def pair_features(positions: np.ndarray) -> np.ndarray:
    """For every vote, a 0/1 vector over pairs ``c < d`` telling whether ``c`` is ranked above ``d``."""
    m = positions.shape[1]
    first, second = np.triu_indices(m, k=1)
    return (positions[:, first] < positions[:, second]).astype(np.int64)


def vote_distance_matrix(metric: VoteMetric | str, positions_a: np.ndarray, positions_b: np.ndarray) -> np.ndarray:
    """All vote-to-vote distances between two sets of votes given as position arrays.

    Args:
        positions_a: ``(n1, m)`` array, ``positions_a[i, c]`` = position of ``c`` in vote ``i``.
        positions_b: ``(n2, m)`` array of the same kind.

    Returns:
        Integer ``(n1, n2)`` matrix of distances.
    """
    metric = VoteMetric.parse(metric)
    a = np.asarray(positions_a, dtype=np.int64)
    b = np.asarray(positions_b, dtype=np.int64)
    if a.shape[1] != b.shape[1]:
        raise SizeMismatchError("votes are over different numbers of candidates")
    if metric is VoteMetric.SWAP:
        fa, fb = pair_features(a), pair_features(b)
        return fa @ (1 - fb).T + (1 - fa) @ fb.T
    if metric is VoteMetric.SPEARMAN:
        return np.abs(a[:, None, :] - b[None, :, :]).sum(axis=2)
    return (a[:, None, :] != b[None, :, :]).any(axis=2).astype(np.int64)
