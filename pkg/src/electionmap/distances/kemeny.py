"""Exact Kemeny rankings by dynamic programming over candidate subsets."""

from __future__ import annotations

import numpy as np

from ..core import OrdinalElection, pairwise_matrix
from ..errors import BudgetExceededError

DEFAULT_MAX_KEMENY_CANDIDATES = 16


def kemeny_from_wins(wins: np.ndarray, max_candidates: int = DEFAULT_MAX_KEMENY_CANDIDATES) -> tuple[int, tuple[int, ...]]:
    """Kemeny score and an optimal ranking for a pairwise count matrix.

    ``wins[c, d]`` is the number of voters preferring ``c`` to ``d``.  The
    ranking is built top-down; placing ``c`` directly below the set ``S``
    costs every voter who prefers some not-yet-placed ``d`` to ``c``.
    Among optimal rankings the one found first in increasing candidate order
    at every layer is returned.
    """
    wins = np.asarray(wins, dtype=np.int64)
    m = wins.shape[0]
    if m > max_candidates:
        raise BudgetExceededError(f"Kemeny dynamic program capped at {max_candidates} candidates, got {m}")
    size = 1 << m
    # inside[S, c] = sum_{d in S} wins[d, c]
    inside = np.zeros((1, m), dtype=np.int64)
    for b in range(m):
        inside = np.concatenate([inside, inside + wins[b][None, :]], axis=0)
    total_in = wins.sum(axis=0)
    popcount = np.array([bin(s).count("1") for s in range(size)], dtype=np.int64)
    best = np.full(size, np.iinfo(np.int64).max // 4, dtype=np.int64)
    choice = np.full(size, -1, dtype=np.int64)
    best[0] = 0
    for k in range(m):
        layer = np.flatnonzero(popcount == k)
        for c in range(m):
            bit = 1 << c
            sources = layer[(layer & bit) == 0]
            if sources.size == 0:
                continue
            # voters preferring some unplaced d (d not in S, d != c) to c
            cost = total_in[c] - inside[sources, c]
            candidate = best[sources] + cost
            targets = sources | bit
            better = candidate < best[targets]
            best[targets[better]] = candidate[better]
            choice[targets[better]] = c
    ranking_reversed = []
    state = size - 1
    while state:
        c = int(choice[state])
        ranking_reversed.append(c)
        state &= ~(1 << c)
    return int(best[size - 1]), tuple(reversed(ranking_reversed))


def kemeny_ranking(election: OrdinalElection, max_candidates: int = DEFAULT_MAX_KEMENY_CANDIDATES) -> tuple[int, tuple[int, ...]]:
    """Return ``(score, ranking)`` minimizing the total swap distance to all votes."""
    return kemeny_from_wins(pairwise_matrix(election), max_candidates)
