"""Single-winner scores, committee scores and committee selection heuristics.

Ties are always broken towards the lowest candidate index; among committees
with equal score the lexicographically smallest sorted tuple wins.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .core import OrdinalElection, borda_vector, pairwise_matrix
from .errors import BudgetExceededError, DomainError, ParameterError

#: Largest number of candidates accepted by the exact Dodgson search.
DODGSON_MAX_CANDIDATES = 8
#: Default cap on the number of dynamic-programming states per candidate.
DODGSON_STATE_BUDGET = 2_000_000
#: Default cap on the number of committees examined by :func:`exact_committee`.
COMMITTEE_BUDGET = 5_000_000

SCORE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ScoreReport:
    """Scores of all candidates under one rule.

    Attributes:
        rule: rule identifier such as ``"borda"``.
        scores: per-candidate scores.
        winners: every candidate attaining the best score, ascending.
        lower_is_better: true for rules such as Dodgson where the minimum wins.
    """

    rule: str
    scores: tuple[float, ...]
    winners: tuple[int, ...]
    lower_is_better: bool = False

    @classmethod
    def from_scores(cls, rule: str, scores: Iterable[float], lower_is_better: bool = False) -> "ScoreReport":
        values = tuple(float(s) for s in scores)
        best = min(values) if lower_is_better else max(values)
        winners = tuple(c for c, s in enumerate(values) if abs(s - best) <= SCORE_TOLERANCE)
        return cls(rule, values, winners, lower_is_better)

    @property
    def winner(self) -> int:
        """The winner after breaking ties towards the lowest index."""
        return self.winners[0]

    @property
    def best_score(self) -> float:
        return self.scores[self.winner]


# ---------------------------------------------------------------------------
# Single-winner rules
# ---------------------------------------------------------------------------


def plurality_scores(election: OrdinalElection) -> ScoreReport:
    counts = np.bincount(election.votes[:, 0], minlength=election.num_candidates)
    return ScoreReport.from_scores("plurality", counts)


def borda_scores(election: OrdinalElection) -> ScoreReport:
    return ScoreReport.from_scores("borda", borda_vector(election))


def copeland_scores(election: OrdinalElection) -> ScoreReport:
    """One point per won duel, half a point per tied duel."""
    wins = pairwise_matrix(election)
    beats = (wins > wins.T).sum(axis=1)
    ties = (wins == wins.T).sum(axis=1) - 1  # the diagonal always ties with itself
    return ScoreReport.from_scores("copeland", beats + 0.5 * ties)


def condorcet_winner(election: OrdinalElection) -> int | None:
    """The candidate preferred to every other one by a strict majority, if any."""
    wins = pairwise_matrix(election)
    n = election.num_voters
    for c in range(election.num_candidates):
        others = np.arange(election.num_candidates) != c
        if (2 * wins[c, others] > n).all():
            return c
    return None


def _dodgson_options(election: OrdinalElection, candidate: int, deficient: list[int]) -> list[list[tuple[int, tuple[int, ...]]]]:
    """Per voter, the useful lifts of ``candidate``: ``(cost, rivals passed)``.

    Lifting by ``t`` positions passes exactly the ``t`` candidates directly
    above.  Only lifts ending right above a deficient rival can be optimal.
    """
    slot = {d: i for i, d in enumerate(deficient)}
    options = []
    for vote, pos in zip(election.votes, election.positions):
        p = int(pos[candidate])
        passed: list[int] = []
        choices: list[tuple[int, tuple[int, ...]]] = []
        for t in range(1, p + 1):
            rival = int(vote[p - t])
            if rival in slot:
                passed.append(slot[rival])
                choices.append((t, tuple(passed)))
        options.append(choices)
    return options


def dodgson_score(
    election: OrdinalElection,
    candidate: int,
    *,
    max_candidates: int = DODGSON_MAX_CANDIDATES,
    state_budget: int = DODGSON_STATE_BUDGET,
) -> int:
    """Fewest swaps of adjacent candidates making ``candidate`` the Condorcet winner.

    Only swaps that lift ``candidate`` are ever useful, so a solution is a lift
    amount per voter.  Voters are processed one at a time while a dictionary
    maps each vector of still-missing duel wins to its cheapest cost.

    Raises:
        BudgetExceededError: more than ``max_candidates`` candidates, or the
            number of live states exceeds ``state_budget``.
    """
    m, n = election.shape
    if not 0 <= candidate < m:
        raise DomainError(f"candidate {candidate} is not in 0..{m - 1}")
    if m > max_candidates:
        raise BudgetExceededError(f"exact Dodgson search is limited to {max_candidates} candidates, got {m}")
    wins = pairwise_matrix(election)
    need = n // 2 + 1
    deficient = [d for d in range(m) if d != candidate and wins[candidate, d] < need]
    if not deficient:
        return 0
    start = tuple(int(need - wins[candidate, d]) for d in deficient)
    options = _dodgson_options(election, candidate, deficient)
    states: dict[tuple[int, ...], int] = {start: 0}
    for choices in options:
        if not choices:
            continue
        nxt = dict(states)
        for state, cost in states.items():
            for t, passed in choices:
                new = list(state)
                for i in passed:
                    if new[i] > 0:
                        new[i] -= 1
                key = tuple(new)
                if cost + t < nxt.get(key, math.inf):
                    nxt[key] = cost + t
        if len(nxt) > state_budget:
            raise BudgetExceededError(f"Dodgson search exceeded {state_budget} states")
        states = nxt
    done = states.get((0,) * len(deficient))
    if done is None:  # unreachable: lifting to the top in every vote always suffices
        raise AssertionError("no Dodgson solution found")
    return int(done)


def dodgson_winner(election: OrdinalElection, **budget) -> ScoreReport:
    scores = [dodgson_score(election, c, **budget) for c in range(election.num_candidates)]
    return ScoreReport.from_scores("dodgson", scores, lower_is_better=True)


def borda_spread(election: OrdinalElection) -> int:
    """Highest minus lowest Borda score."""
    scores = borda_vector(election)
    return int(scores.max() - scores.min())


# ---------------------------------------------------------------------------
# Committee scores
# ---------------------------------------------------------------------------


class CommitteeRule(str, Enum):
    CC = "cc"
    HB = "hb"

    @classmethod
    def parse(cls, value: "CommitteeRule | str") -> "CommitteeRule":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise DomainError(f"unknown committee rule {value!r}; expected 'cc' or 'hb'") from None


def satisfaction_matrix(election: OrdinalElection) -> np.ndarray:
    """``sat[v, c]``: Borda-style points ``m - 1 - position`` of ``c`` in vote ``v``."""
    return election.num_candidates - 1 - election.positions


def _committee(committee: Iterable[int], m: int) -> tuple[int, ...]:
    members = tuple(sorted(set(int(c) for c in committee)))
    if len(members) == 0:
        raise DomainError("a committee needs at least one member")
    if members[0] < 0 or members[-1] >= m:
        raise DomainError(f"committee members must lie in 0..{m - 1}")
    return members


def _cc_values(sat: np.ndarray, committees: np.ndarray) -> np.ndarray:
    """CC scores of a batch of committees given as rows of candidate indices."""
    return sat[:, committees].max(axis=2).sum(axis=0)


def _hb_values(sat: np.ndarray, committees: np.ndarray) -> np.ndarray:
    k = committees.shape[1]
    weights = 1.0 / np.arange(1, k + 1)
    ordered = -np.sort(-sat[:, committees], axis=2)
    return (ordered * weights).sum(axis=2).sum(axis=0)


def cc_score(election: OrdinalElection, committee: Iterable[int]) -> int:
    """Chamberlin-Courant score: each voter counts the points of their best committee member."""
    members = _committee(committee, election.num_candidates)
    return int(_cc_values(satisfaction_matrix(election), np.array([members]))[0])


def hb_score(election: OrdinalElection, committee: Iterable[int]) -> float:
    """Harmonic-Borda score: the i-th best member of each voter counts with weight 1/i."""
    members = _committee(committee, election.num_candidates)
    return float(_hb_values(satisfaction_matrix(election), np.array([members]))[0])


def committee_score(election: OrdinalElection, committee: Iterable[int], rule: CommitteeRule | str) -> float:
    if CommitteeRule.parse(rule) is CommitteeRule.CC:
        return float(cc_score(election, committee))
    return hb_score(election, committee)


def _check_size(k: int, m: int) -> None:
    if not 1 <= k <= m:
        raise ParameterError(f"committee size must be in 1..{m}, got {k}")


def exact_committee(
    election: OrdinalElection,
    k: int,
    rule: CommitteeRule | str = CommitteeRule.CC,
    *,
    budget: int = COMMITTEE_BUDGET,
    batch: int = 4096,
) -> tuple[tuple[int, ...], float]:
    """Optimal committee by enumerating all ``C(m, k)`` committees.

    Committees are visited in lexicographic order and only strict improvements
    are kept, so ties resolve to the lexicographically smallest committee.

    Raises:
        BudgetExceededError: ``C(m, k)`` exceeds ``budget``.
    """
    rule = CommitteeRule.parse(rule)
    m = election.num_candidates
    _check_size(k, m)
    total = math.comb(m, k)
    if total > budget:
        raise BudgetExceededError(f"{total} committees exceed the enumeration budget of {budget}")
    sat = satisfaction_matrix(election)
    values_of = _cc_values if rule is CommitteeRule.CC else _hb_values
    best_value = -math.inf
    best: tuple[int, ...] = ()
    combos = itertools.combinations(range(m), k)
    while True:
        chunk = list(itertools.islice(combos, batch))
        if not chunk:
            break
        block = np.array(chunk, dtype=np.int64)
        values = values_of(sat, block)
        i = int(np.argmax(values))  # first maximum within the chunk
        if values[i] > best_value + SCORE_TOLERANCE:
            best_value = float(values[i])
            best = tuple(int(c) for c in block[i])
    return best, best_value


# ---------------------------------------------------------------------------
# Approximation algorithms
# ---------------------------------------------------------------------------


def _greedy_add(sat: np.ndarray, k: int, values_of) -> tuple[int, ...]:
    m = sat.shape[1]
    chosen: list[int] = []
    for _ in range(k):
        rest = [c for c in range(m) if c not in chosen]
        block = np.array([sorted(chosen + [c]) for c in rest], dtype=np.int64)
        values = values_of(sat, block)
        chosen.append(rest[_first_best(values)])
    return tuple(sorted(chosen))


def _greedy_remove(sat: np.ndarray, k: int, values_of) -> tuple[int, ...]:
    kept = list(range(sat.shape[1]))
    while len(kept) > k:
        block = np.array([[d for d in kept if d != c] for c in kept], dtype=np.int64)
        values = values_of(sat, block)
        kept.remove(kept[_first_best(values)])
    return tuple(kept)


def _first_best(values: np.ndarray) -> int:
    """Index of the first value within tolerance of the maximum."""
    return int(np.flatnonzero(values >= values.max() - SCORE_TOLERANCE)[0])


def seq_cc(election: OrdinalElection, k: int) -> tuple[int, ...]:
    """Greedy CC: add, ``k`` times, the candidate that raises the score most."""
    _check_size(k, election.num_candidates)
    return _greedy_add(satisfaction_matrix(election), k, _cc_values)


def removal_cc(election: OrdinalElection, k: int) -> tuple[int, ...]:
    """Start from all candidates; repeatedly drop the one whose removal hurts least."""
    _check_size(k, election.num_candidates)
    return _greedy_remove(satisfaction_matrix(election), k, _cc_values)


def seq_hb(election: OrdinalElection, k: int) -> tuple[int, ...]:
    _check_size(k, election.num_candidates)
    return _greedy_add(satisfaction_matrix(election), k, _hb_values)


def removal_hb(election: OrdinalElection, k: int) -> tuple[int, ...]:
    _check_size(k, election.num_candidates)
    return _greedy_remove(satisfaction_matrix(election), k, _hb_values)


def _threshold_cover(election: OrdinalElection, k: int, depth: int) -> tuple[int, ...]:
    """Cover voters greedily, counting a voter for every candidate in their top ``depth``."""
    m, n = election.shape
    top = election.positions < depth
    uncovered = np.ones(n, dtype=bool)
    chosen: list[int] = []
    for _ in range(k):
        gains = top[uncovered].sum(axis=0)
        gains[chosen] = -1
        c = int(np.argmax(gains))
        chosen.append(c)
        uncovered &= ~top[:, c]
    return tuple(sorted(chosen))


def ranging_cc(election: OrdinalElection, k: int) -> tuple[int, ...]:
    """Threshold sweep for CC.

    For every depth from ``m`` down to 1, build a committee by repeatedly
    taking the candidate appearing in the top ``depth`` positions of the most
    still-uncovered voters.  The committee with the best CC score wins.
    """
    m = election.num_candidates
    _check_size(k, m)
    sat = satisfaction_matrix(election)
    best: tuple[int, ...] = ()
    best_value = -math.inf
    for depth in range(m, 0, -1):
        committee = _threshold_cover(election, k, depth)
        value = float(_cc_values(sat, np.array([committee]))[0])
        if value > best_value + SCORE_TOLERANCE or (abs(value - best_value) <= SCORE_TOLERANCE and committee < best):
            best, best_value = committee, value
    return best


def _comb(a: int, b: int) -> int:
    return math.comb(a, b) if a >= 0 else 0


def expected_cc_with_random_fill(sat: np.ndarray, fixed: Sequence[int], extra: int) -> float:
    """Expected CC score of ``fixed`` plus ``extra`` members drawn uniformly from the rest.

    For each voter, the candidates ranked above the best fixed member are all
    outside ``fixed``.  The best random member sits at the ``j``-th such
    position with probability ``C(N - j - 1, extra - 1) / C(N, extra)``, where
    ``N`` is the number of candidates outside ``fixed``.
    """
    m = sat.shape[1]
    fixed = list(fixed)
    pool = m - len(fixed)
    if extra < 0 or extra > pool:
        raise ParameterError(f"cannot draw {extra} members from {pool} candidates")
    base = sat[:, fixed].max(axis=1)  # satisfaction of the best fixed member
    if extra == 0:
        return float(base.sum())
    total_ways = math.comb(pool, extra)
    above = m - 1 - base  # number of candidates ranked above the best fixed member
    probs = np.array([_comb(pool - j - 1, extra - 1) / total_ways for j in range(m)])
    miss = np.array([_comb(pool - j, extra) / total_ways for j in range(m + 1)])
    points = m - 1 - np.arange(m)
    value = 0.0
    for b, a in zip(base, above):
        value += float(np.dot(probs[:a], points[:a])) + miss[a] * b
    return value


def banzhaf_cc(election: OrdinalElection, k: int) -> tuple[int, ...]:
    """Greedy CC guided by expected final scores.

    At each step the candidate maximizing the expected CC score of the current
    committee, itself, and a uniformly random completion of the remaining
    slots is added.
    """
    m = election.num_candidates
    _check_size(k, m)
    sat = satisfaction_matrix(election)
    chosen: list[int] = []
    for step in range(k):
        extra = k - step - 1
        best_c, best_value = -1, -math.inf
        for c in range(m):
            if c in chosen:
                continue
            value = expected_cc_with_random_fill(sat, chosen + [c], extra)
            if value > best_value + SCORE_TOLERANCE:
                best_c, best_value = c, value
        chosen.append(best_c)
    return tuple(sorted(chosen))


APPROXIMATIONS = {
    "seq-cc": (seq_cc, CommitteeRule.CC),
    "removal-cc": (removal_cc, CommitteeRule.CC),
    "ranging-cc": (ranging_cc, CommitteeRule.CC),
    "banzhaf-cc": (banzhaf_cc, CommitteeRule.CC),
    "seq-hb": (seq_hb, CommitteeRule.HB),
    "removal-hb": (removal_hb, CommitteeRule.HB),
}
