"""Isomorphic distances between ordinal elections.

The isomorphic distance between ``E1`` and ``E2`` under a vote metric ``d`` is
the minimum, over candidate bijections ``sigma`` and voter matchings ``nu``, of
``sum_i d(sigma(v_i), u_nu(i))``.  Either matching may be fixed in advance.

Solvers, by case:

* both matchings given: direct evaluation;
* candidate matching given: voter assignment on the ``n x n`` cost matrix;
* discrete metric: every optimal bijection with at least one exactly matched
  vote pair is induced by such a pair, so enumerating vote pairs suffices;
* Spearman with a voter matching: candidate assignment, because the cost is
  additive over candidates;
* one election with all votes identical: swap reduces to a Kemeny ranking,
  Spearman to a candidate-to-position assignment;
* otherwise swap/Spearman are NP-hard; we either enumerate all ``m!``
  bijections (``method="brute"``) or run an exact branch and bound over
  partial bijections (``method="bnb"``).  Both are capped by ``max_candidates``.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..core import OrdinalElection, pairwise_matrix, position_matrix
from ..errors import BudgetExceededError, DomainError, SizeMismatchError
from ..matching import assignment_value, lexicographic_min_assignment, min_cost_assignment
from .kemeny import kemeny_from_wins
from .votes import VoteMetric, vote_distance_matrix

DEFAULT_MAX_CANDIDATES = 8


@dataclass(frozen=True)
class MatchingConstraint:
    """Optional fixed matchings from the first election to the second.

    ``candidate_map[c]`` is the candidate of the second election matched with
    candidate ``c`` of the first; ``voter_map[i]`` likewise for voters.
    """

    candidate_map: tuple[int, ...] | None = None
    voter_map: tuple[int, ...] | None = None

    def __post_init__(self):
        for name in ("candidate_map", "voter_map"):
            value = getattr(self, name)
            if value is not None:
                value = tuple(int(x) for x in value)
                if sorted(value) != list(range(len(value))):
                    raise DomainError(f"{name} must be a bijection")
                object.__setattr__(self, name, value)


@dataclass(frozen=True)
class IsoResult:
    """Value of an isomorphic distance together with an optimal witness."""

    distance: int
    candidate_map: tuple[int, ...]
    voter_map: tuple[int, ...]


NO_CONSTRAINT = MatchingConstraint()


def relabeled_positions(positions: np.ndarray, candidate_map: Sequence[int]) -> np.ndarray:
    """Positions of the votes after renaming candidate ``c`` to ``candidate_map[c]``."""
    inverse = np.empty(len(candidate_map), dtype=np.int64)
    inverse[np.asarray(candidate_map, dtype=np.int64)] = np.arange(len(candidate_map))
    return positions[:, inverse]


def _check_sizes(e1: OrdinalElection, e2: OrdinalElection, constraint: MatchingConstraint) -> None:
    if e1.num_candidates != e2.num_candidates or e1.num_voters != e2.num_voters:
        raise SizeMismatchError(f"isomorphic distances need equal sizes, got {e1.shape} and {e2.shape}")
    if constraint.candidate_map is not None and len(constraint.candidate_map) != e1.num_candidates:
        raise SizeMismatchError("candidate matching has the wrong size")
    if constraint.voter_map is not None and len(constraint.voter_map) != e1.num_voters:
        raise SizeMismatchError("voter matching has the wrong size")


def _voter_assignment(cost: np.ndarray, witness: bool) -> tuple[int, tuple[int, ...]]:
    if witness:
        value, perm = lexicographic_min_assignment(cost)
    else:
        value, perm = min_cost_assignment(cost)
    return int(round(value)), tuple(int(x) for x in perm)


def _identity(k: int) -> tuple[int, ...]:
    return tuple(range(k))


def _invert(mapping: Sequence[int]) -> tuple[int, ...]:
    inverse = [0] * len(mapping)
    for i, x in enumerate(mapping):
        inverse[x] = i
    return tuple(inverse)


def _vote_key(row: np.ndarray) -> tuple[int, ...]:
    return tuple(int(c) for c in row)


def _bijection_from_votes(v: np.ndarray, u: np.ndarray) -> tuple[int, ...]:
    """The unique bijection sending vote ``v`` onto vote ``u`` position by position."""
    sigma = np.empty(v.size, dtype=np.int64)
    sigma[v] = u
    return tuple(int(x) for x in sigma)


# ---------------------------------------------------------------------------
# Constrained cases
# ---------------------------------------------------------------------------


def _both_fixed(metric, e1, e2, constraint):
    pos1 = relabeled_positions(e1.positions, constraint.candidate_map)
    pos2 = e2.positions[list(constraint.voter_map)]
    total = 0
    for i in range(e1.num_voters):
        total += int(vote_distance_matrix(metric, pos1[i : i + 1], pos2[i : i + 1])[0, 0])
    return IsoResult(total, constraint.candidate_map, constraint.voter_map)


def _candidates_fixed(metric, e1, e2, constraint, witness):
    cost = vote_distance_matrix(metric, relabeled_positions(e1.positions, constraint.candidate_map), e2.positions)
    value, voters = _voter_assignment(cost, witness)
    return IsoResult(value, constraint.candidate_map, voters)


def _discrete_voters_fixed(e1, e2, voter_map):
    n, m = e1.num_voters, e1.num_candidates
    targets = e2.votes[list(voter_map)]
    best = (n, _identity(m))
    seen = set()
    for i in range(n):
        sigma = _bijection_from_votes(e1.votes[i], targets[i])
        if sigma in seen:
            continue
        seen.add(sigma)
        mapped = np.asarray(sigma)[e1.votes]
        cost = int((mapped != targets).any(axis=1).sum())
        if (cost, sigma) < best:
            best = (cost, sigma)
    return IsoResult(best[0], best[1], tuple(voter_map))


def _spearman_voters_fixed(e1, e2, voter_map, witness):
    pos1 = e1.positions
    pos2 = e2.positions[list(voter_map)]
    cost = np.abs(pos1[:, :, None] - pos2[:, None, :]).sum(axis=0)
    if witness:
        value, perm = lexicographic_min_assignment(cost)
    else:
        value, perm = min_cost_assignment(cost)
    return IsoResult(int(round(value)), tuple(int(x) for x in perm), tuple(voter_map))


def _swap_voters_fixed(e1, e2, voter_map, max_candidates):
    m = e1.num_candidates
    if m > max_candidates:
        raise BudgetExceededError(f"swap distance with a voter matching enumerates m! bijections; m={m} exceeds cap {max_candidates}")
    pos2 = e2.positions[list(voter_map)]
    best = None
    for sigma in itertools.permutations(range(m)):
        pos1 = relabeled_positions(e1.positions, sigma)
        value = int(vote_distance_matrix(VoteMetric.SWAP, pos1, pos2).diagonal().sum())
        if best is None or value < best[0]:
            best = (value, sigma)
    return IsoResult(best[0], tuple(best[1]), tuple(voter_map))


# ---------------------------------------------------------------------------
# Unconstrained cases
# ---------------------------------------------------------------------------


def _vote_counts(election: OrdinalElection) -> Counter:
    return Counter(_vote_key(row) for row in election.votes)


def _discrete_overlap(sigma: tuple[int, ...], counts1: Counter, counts2: Counter) -> int:
    """Number of votes that can be matched exactly once ``e1`` is renamed by ``sigma``."""
    if len(counts1) <= len(counts2):
        return sum(min(k, counts2.get(tuple(sigma[c] for c in key), 0)) for key, k in counts1.items())
    inverse = _invert(sigma)
    return sum(min(k, counts1.get(tuple(inverse[c] for c in key), 0)) for key, k in counts2.items())


def _discrete_voter_matching(e1, e2, sigma) -> tuple[int, ...]:
    """An optimal voter matching for the discrete metric under a fixed bijection.

    Equal votes are paired greedily in voter order; the rest are paired in
    increasing index order.  Any maximum set of equal pairs is optimal.
    """
    n = e1.num_voters
    pools: dict[tuple[int, ...], list[int]] = {}
    for j in range(n - 1, -1, -1):
        pools.setdefault(_vote_key(e2.votes[j]), []).append(j)
    mapped = np.asarray(sigma)[e1.votes]
    result = [-1] * n
    used = [False] * n
    for i in range(n):
        pool = pools.get(_vote_key(mapped[i]))
        if pool:
            j = pool.pop()
            result[i], used[j] = j, True
    leftovers = iter(j for j in range(n) if not used[j])
    for i in range(n):
        if result[i] < 0:
            result[i] = next(leftovers)
    return tuple(result)


def _discrete_free(e1, e2, witness):
    n, m = e1.num_voters, e1.num_candidates
    counts1, counts2 = _vote_counts(e1), _vote_counts(e2)
    best_cost, best_sigma = n, _identity(m)
    seen = set()
    for v in sorted(counts1):
        for u in sorted(counts2):
            sigma = _bijection_from_votes(np.asarray(v), np.asarray(u))
            if sigma in seen:
                continue
            seen.add(sigma)
            cost = n - _discrete_overlap(sigma, counts1, counts2)
            if cost < best_cost or (cost == best_cost and sigma < best_sigma):
                best_cost, best_sigma = cost, sigma
    voters = _discrete_voter_matching(e1, e2, best_sigma) if witness else _identity(n)
    return IsoResult(best_cost, best_sigma, voters)


def _all_identical(election: OrdinalElection) -> bool:
    return bool((election.votes == election.votes[0]).all())


def _to_identical(metric, e1, e2, witness, max_candidates):
    """Distance from ``e1`` to ``e2`` when every vote of ``e2`` equals ``u``."""
    n, m = e1.num_voters, e1.num_candidates
    u = e2.votes[0]
    if metric is VoteMetric.SWAP:
        value, ranking = kemeny_from_wins(pairwise_matrix(e1), max(max_candidates, m))
    elif metric is VoteMetric.SPEARMAN:
        # cost[c, p] = total displacement if c is put at position p
        cost = np.abs(e1.positions[:, :, None] - np.arange(m)[None, None, :]).sum(axis=0)
        value, perm = lexicographic_min_assignment(cost) if witness else min_cost_assignment(cost)
        value = int(round(value))
        ranking = [0] * m
        for c, p in enumerate(perm):
            ranking[int(p)] = c
    else:
        counts = Counter(_vote_key(row) for row in e1.votes)
        top = max(counts.values())
        ranking = min(key for key, k in counts.items() if k == top)
        value = n - top
    sigma = _bijection_from_votes(np.asarray(ranking), u)
    return IsoResult(int(value), sigma, _identity(n))


def _brute_force(metric, e1, e2, witness, max_candidates):
    m = e1.num_candidates
    if m > max_candidates:
        raise BudgetExceededError(f"brute force enumerates m! bijections; m={m} exceeds cap {max_candidates}")
    best_value, best_sigma = None, None
    for sigma in itertools.permutations(range(m)):
        cost = vote_distance_matrix(metric, relabeled_positions(e1.positions, sigma), e2.positions)
        value = int(round(assignment_value(cost)))
        if best_value is None or value < best_value:
            best_value, best_sigma = value, sigma
            if value == 0:
                break
    voters = _identity(e1.num_voters)
    if witness:
        cost = vote_distance_matrix(metric, relabeled_positions(e1.positions, best_sigma), e2.positions)
        _, voters = _voter_assignment(cost, True)
    return IsoResult(best_value, tuple(best_sigma), voters)


class _BranchAndBound:
    """Exact search over partial candidate bijections for swap and Spearman.

    Candidates of the first election are assigned in a fixed order.  For a
    partial bijection the cost of every voter pair is split into a part that
    is already determined (candidate pairs, resp. candidates, that are fully
    mapped) and a remainder.  The bound is the optimal voter assignment on the
    determined part plus a voter-independent lower bound on the remainder:

    * Spearman: a candidate ``d`` mapped to ``y`` costs at least the EMD between
      the position columns of ``d`` and ``y``; unmapped candidates are bounded
      by an assignment over these EMDs.
    * swap: a candidate pair ``(c, d)`` mapped to ``(x, y)`` is split by at
      least ``|M1(c, d) - M2(x, y)|`` voter pairs.  Pairs with one mapped end
      are bounded by an assignment over the unmapped candidates; pairs with
      two unmapped ends by matching sorted folded majority margins.

    A second bound adds a per-voter-pair remainder to the determined part
    before solving the voter assignment.  For Spearman it is the L1 distance
    between the sorted positions of the unmapped candidates in the two votes.
    For swap, an unmapped candidate lies in one of the gaps between the
    mapped candidates of a vote; the number of mapped candidates above it is
    its slot, and the sorted slot sequences of two votes give a lower bound
    on the pairs with exactly one mapped end.  The larger of the two bounds
    is used.
    """

    def __init__(self, metric: VoteMetric, e1: OrdinalElection, e2: OrdinalElection, node_budget: int | None):
        self.metric = metric
        self.n, self.m = e1.num_voters, e1.num_candidates
        self.pos1 = e1.positions
        self.pos2 = e2.positions
        self.node_budget = node_budget
        self.nodes = 0
        if metric is VoteMetric.SWAP:
            self.wins1 = pairwise_matrix(e1)
            self.wins2 = pairwise_matrix(e2)
        else:
            p1 = position_matrix(e1).astype(float)
            p2 = position_matrix(e2).astype(float)
            prefix1 = np.cumsum(p1, axis=0)
            prefix2 = np.cumsum(p2, axis=0)
            self.column_emd = np.abs(prefix1[:, :, None] - prefix2[:, None, :]).sum(axis=0)
        # assign the most "decisive" candidates first
        if metric is VoteMetric.SWAP:
            spread = np.abs(self.wins1 - self.n / 2).sum(axis=1)
        else:
            spread = np.abs(self.pos1 - (self.m - 1) / 2).sum(axis=0)
        self.order = [int(c) for c in np.argsort(-spread, kind="stable")]

    # -- exact evaluation -------------------------------------------------
    def evaluate(self, sigma: Sequence[int]) -> int:
        cost = vote_distance_matrix(self.metric, relabeled_positions(self.pos1, sigma), self.pos2)
        return int(round(assignment_value(cost)))

    # -- bounds -------------------------------------------------------------
    def _increment(self, assigned: list[tuple[int, int]], c: int, x: int) -> np.ndarray:
        if self.metric is VoteMetric.SPEARMAN:
            return np.abs(self.pos1[:, c][:, None] - self.pos2[:, x][None, :])
        if not assigned:
            return np.zeros((self.n, self.n), dtype=np.int64)
        prev1 = [a for a, _ in assigned]
        prev2 = [b for _, b in assigned]
        above1 = (self.pos1[:, [c]] < self.pos1[:, prev1]).astype(np.int64)
        above2 = (self.pos2[:, [x]] < self.pos2[:, prev2]).astype(np.int64)
        return above1 @ (1 - above2).T + (1 - above1) @ above2.T

    def _remainder(self, assigned: list[tuple[int, int]], free1: list[int], free2: list[int]) -> float:
        if not free1:
            return 0.0
        if self.metric is VoteMetric.SPEARMAN:
            return assignment_value(self.column_emd[np.ix_(free1, free2)])
        bound = 0.0
        if assigned:
            prev1 = [a for a, _ in assigned]
            prev2 = [b for _, b in assigned]
            w1 = self.wins1[np.ix_(prev1, free1)]  # (k, f)
            w2 = self.wins2[np.ix_(prev2, free2)]
            mixed = np.abs(w1[:, :, None] - w2[:, None, :]).sum(axis=0)
            bound += assignment_value(mixed)
        if len(free1) >= 2:
            iu = np.triu_indices(len(free1), k=1)
            a = self.wins1[np.ix_(free1, free1)][iu]
            b = self.wins2[np.ix_(free2, free2)][iu]
            a = np.sort(np.minimum(a, self.n - a))
            b = np.sort(np.minimum(b, self.n - b))
            bound += float(np.abs(a - b).sum())
        return bound

    def _pair_remainder(self, assigned: list[tuple[int, int]], free1: list[int], free2: list[int]) -> np.ndarray:
        if self.metric is VoteMetric.SPEARMAN:
            left = np.sort(self.pos1[:, free1], axis=1)
            right = np.sort(self.pos2[:, free2], axis=1)
        else:
            prev1 = [a for a, _ in assigned]
            prev2 = [b for _, b in assigned]
            left = (self.pos1[:, prev1][:, :, None] < self.pos1[:, free1][:, None, :]).sum(axis=1)
            right = (self.pos2[:, prev2][:, :, None] < self.pos2[:, free2][:, None, :]).sum(axis=1)
            left, right = np.sort(left, axis=1), np.sort(right, axis=1)
        return np.abs(left[:, None, :] - right[None, :, :]).sum(axis=2)

    def _free_pairs(self, free1: list[int], free2: list[int]) -> float:
        if self.metric is VoteMetric.SPEARMAN or len(free1) < 2:
            return 0.0
        iu = np.triu_indices(len(free1), k=1)
        a = self.wins1[np.ix_(free1, free1)][iu]
        b = self.wins2[np.ix_(free2, free2)][iu]
        a = np.sort(np.minimum(a, self.n - a))
        b = np.sort(np.minimum(b, self.n - b))
        return float(np.abs(a - b).sum())

    def _bound(self, assigned: list[tuple[int, int]], child: np.ndarray, free1: list[int], free2: list[int]) -> float:
        if not free1:
            return assignment_value(child)
        split = assignment_value(child) + self._remainder(assigned, free1, free2)
        joint = assignment_value(child + self._pair_remainder(assigned, free1, free2)) + self._free_pairs(free1, free2)
        return max(split, joint)

    # -- heuristics for the initial incumbent --------------------------------
    def _initial(self) -> tuple[int, tuple[int, ...]]:
        m = self.m
        if self.metric is VoteMetric.SPEARMAN:
            cost = self.column_emd
        else:
            col1 = np.stack([np.bincount(self.pos1[:, c], minlength=m) for c in range(m)], axis=1)
            col2 = np.stack([np.bincount(self.pos2[:, c], minlength=m) for c in range(m)], axis=1)
            pre1, pre2 = np.cumsum(col1, axis=0), np.cumsum(col2, axis=0)
            cost = np.abs(pre1[:, :, None] - pre2[:, None, :]).sum(axis=0)
        _, perm = min_cost_assignment(cost)
        sigma = [int(x) for x in perm]
        value = self.evaluate(sigma)
        return self._local_search(value, sigma)

    def _local_search(self, value: int, sigma: list[int]) -> tuple[int, tuple[int, ...]]:
        improved = True
        while improved and value > 0:
            improved = False
            for a in range(self.m):
                for b in range(a + 1, self.m):
                    trial = list(sigma)
                    trial[a], trial[b] = trial[b], trial[a]
                    trial_value = self.evaluate(trial)
                    if trial_value < value:
                        value, sigma, improved = trial_value, trial, True
        return value, tuple(sigma)

    # -- search -------------------------------------------------------------
    def solve(self) -> tuple[int, tuple[int, ...]]:
        self.best_value, self.best_sigma = self._initial()
        root_bound = self._remainder([], list(self.order), list(range(self.m)))
        if self.best_value > root_bound - 1e-9:
            partial = np.zeros((self.n, self.n), dtype=np.int64)
            self._dfs([], partial, set(range(self.m)))
        return self.best_value, self.best_sigma

    def _dfs(self, assigned: list[tuple[int, int]], partial: np.ndarray, free2: set[int]) -> None:
        self.nodes += 1
        if self.node_budget is not None and self.nodes > self.node_budget:
            raise BudgetExceededError(f"branch and bound exceeded {self.node_budget} nodes")
        depth = len(assigned)
        if depth == self.m:
            sigma = [0] * self.m
            for c, x in assigned:
                sigma[c] = x
            value = int(round(assignment_value(partial)))
            if value < self.best_value:
                self.best_value, self.best_sigma = value, tuple(sigma)
            return
        c = self.order[depth]
        free1_rest = self.order[depth + 1 :]
        children = []
        for x in sorted(free2):
            child = partial + self._increment(assigned, c, x)
            rest2 = sorted(free2 - {x})
            new_assigned = assigned + [(c, x)]
            bound = self._bound(new_assigned, child, free1_rest, rest2)
            children.append((bound, x, child))
        children.sort(key=lambda item: (item[0], item[1]))
        for bound, x, child in children:
            if bound >= self.best_value - 1e-9:
                break
            self._dfs(assigned + [(c, x)], child, free2 - {x})
            if self.best_value == 0:
                return


def _branch_and_bound(metric, e1, e2, witness, max_candidates, node_budget):
    m = e1.num_candidates
    if m > max_candidates:
        raise BudgetExceededError(f"exact search capped at {max_candidates} candidates, got {m}")
    solver = _BranchAndBound(metric, e1, e2, node_budget)
    value, sigma = solver.solve()
    voters = _identity(e1.num_voters)
    if witness:
        cost = vote_distance_matrix(metric, relabeled_positions(e1.positions, sigma), e2.positions)
        _, voters = _voter_assignment(cost, True)
    return IsoResult(value, sigma, voters)


# ---------------------------------------------------------------------------
# Public entry points
# ---------------------------------------------------------------------------


def iso_distance_witness(
    metric: VoteMetric | str,
    e1: OrdinalElection,
    e2: OrdinalElection,
    constraint: MatchingConstraint | None = None,
    *,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
    method: str = "auto",
    node_budget: int | None = None,
    witness: bool = True,
) -> IsoResult:
    """Isomorphic distance together with an optimal candidate and voter matching.

    Args:
        metric: ``"swap"``, ``"spearman"`` or ``"discrete"``.
        constraint: optional fixed candidate and/or voter matching.
        max_candidates: cap on ``m`` for the exponential swap/Spearman solvers.
        method: ``"auto"``, ``"brute"`` (enumerate all bijections) or ``"bnb"``
            (branch and bound); only used for unconstrained swap/Spearman.
        node_budget: optional cap on branch-and-bound nodes.
        witness: when false, the voter matching returned for unconstrained
            cases is not computed (identity is reported).

    Raises:
        SizeMismatchError: elections of different shapes.
        BudgetExceededError: the exact search would exceed its cap.
    """
    metric = VoteMetric.parse(metric)
    constraint = constraint or NO_CONSTRAINT
    _check_sizes(e1, e2, constraint)
    if method not in ("auto", "brute", "bnb"):
        raise DomainError(f"unknown method {method!r}")

    if constraint.candidate_map is not None and constraint.voter_map is not None:
        return _both_fixed(metric, e1, e2, constraint)
    if constraint.candidate_map is not None:
        return _candidates_fixed(metric, e1, e2, constraint, witness)
    if constraint.voter_map is not None:
        if metric is VoteMetric.DISCRETE:
            return _discrete_voters_fixed(e1, e2, constraint.voter_map)
        if metric is VoteMetric.SPEARMAN:
            return _spearman_voters_fixed(e1, e2, constraint.voter_map, witness)
        return _swap_voters_fixed(e1, e2, constraint.voter_map, max_candidates)

    if metric is VoteMetric.DISCRETE:
        return _discrete_free(e1, e2, witness)
    if method == "brute":
        return _brute_force(metric, e1, e2, witness, max_candidates)
    if _all_identical(e2):
        return _to_identical(metric, e1, e2, witness, max_candidates)
    if _all_identical(e1):
        flipped = _to_identical(metric, e2, e1, witness, max_candidates)
        return IsoResult(flipped.distance, _invert(flipped.candidate_map), _identity(e1.num_voters))
    if method == "auto" and e1.num_candidates <= 4:
        return _brute_force(metric, e1, e2, witness, max_candidates)
    return _branch_and_bound(metric, e1, e2, witness, max_candidates, node_budget)


def iso_distance(
    metric: VoteMetric | str,
    e1: OrdinalElection,
    e2: OrdinalElection,
    constraint: MatchingConstraint | None = None,
    *,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
    method: str = "auto",
    node_budget: int | None = None,
) -> int:
    """Isomorphic swap, Spearman or discrete distance (see :func:`iso_distance_witness`)."""
    return iso_distance_witness(
        metric,
        e1,
        e2,
        constraint,
        max_candidates=max_candidates,
        method=method,
        node_budget=node_budget,
        witness=False,
    ).distance
