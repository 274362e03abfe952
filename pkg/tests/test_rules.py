import itertools
import math
from collections import deque

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from electionmap.core import OrdinalElection, pairwise_matrix
from electionmap.cultures import compass_election, sample_election
from electionmap.errors import BudgetExceededError, DomainError, ParameterError
from electionmap.rules import (
    APPROXIMATIONS,
    CommitteeRule,
    banzhaf_cc,
    borda_scores,
    borda_spread,
    cc_score,
    committee_score,
    condorcet_winner,
    copeland_scores,
    dodgson_score,
    dodgson_winner,
    exact_committee,
    expected_cc_with_random_fill,
    hb_score,
    plurality_scores,
    ranging_cc,
    removal_cc,
    satisfaction_matrix,
    seq_cc,
    seq_hb,
)

from .conftest import elections, votes_from_letters

GREEDY_BOUND = 1 - 1 / math.e


def is_condorcet_winner(votes, c):
    n = len(votes)
    m = len(votes[0])
    for d in range(m):
        if d != c and 2 * sum(v.index(c) < v.index(d) for v in votes) <= n:
            return False
    return True


def bfs_dodgson(election, c, depth):
    """Smallest number of adjacent swaps anywhere in the profile making ``c`` win, or None."""
    start = tuple(tuple(int(x) for x in v) for v in election.votes)
    seen = {start}
    queue = deque([(start, 0)])
    while queue:
        state, dist = queue.popleft()
        if is_condorcet_winner([list(v) for v in state], c):
            return dist
        if dist == depth:
            continue
        for i, vote in enumerate(state):
            for j in range(len(vote) - 1):
                swapped = list(vote)
                swapped[j], swapped[j + 1] = swapped[j + 1], swapped[j]
                nxt = state[:i] + (tuple(swapped),) + state[i + 1:]
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append((nxt, dist + 1))
    return None


def lift_dodgson(election, c):
    """Enumerate every vector of per-voter lift amounts for ``c``."""
    votes = [list(map(int, v)) for v in election.votes]
    best = math.inf
    for lifts in itertools.product(*[range(v.index(c) + 1) for v in votes]):
        lifted = []
        for v, t in zip(votes, lifts):
            p = v.index(c)
            lifted.append(v[: p - t] + [c] + v[p - t: p] + v[p + 1:])
        if sum(lifts) < best and is_condorcet_winner(lifted, c):
            best = sum(lifts)
    return best


def plain_committee_score(election, committee, rule):
    m = election.num_candidates
    total = 0.0
    for vote in election.votes:
        points = sorted((m - 1 - list(vote).index(c) for c in committee), reverse=True)
        if rule == "cc":
            total += points[0]
        else:
            total += sum(p / (i + 1) for i, p in enumerate(points))
    return total


def reversed_enumeration(election, k, rule):
    """Walk committees in reverse lexicographic order, keeping ties, so the last winner is smallest."""
    best, best_value = None, -math.inf
    for committee in reversed(list(itertools.combinations(range(election.num_candidates), k))):
        value = plain_committee_score(election, committee, rule)
        if value >= best_value - 1e-9:
            if value > best_value + 1e-9 or committee < best:
                best = committee
            best_value = max(value, best_value)
    return best, best_value


class TestSingleWinner:
    def test_worked_example(self, rules_example):
        plurality = plurality_scores(rules_example)
        assert plurality.winner == 0 and plurality.best_score == 2
        borda = borda_scores(rules_example)
        assert borda.winner == 1 and borda.best_score == 13
        copeland = copeland_scores(rules_example)
        assert copeland.winner == 2 and copeland.best_score == 4
        assert condorcet_winner(rules_example) == 2
        assert dodgson_score(rules_example, 2) == 0
        assert dodgson_winner(rules_example).winner == 2

    def test_antagonism_has_no_condorcet_winner(self):
        assert condorcet_winner(compass_election("AN", 4, 6, exact=True)) is None

    @given(elections(max_m=5, max_n=7))
    def test_condorcet_winner_matches_pairwise_oracle(self, election):
        winner = condorcet_winner(election)
        wins = pairwise_matrix(election)
        n = election.num_voters
        expected = [
            c
            for c in range(election.num_candidates)
            if all(2 * wins[c, d] > n for d in range(election.num_candidates) if d != c)
        ]
        assert winner == (expected[0] if expected else None)

    @given(elections(max_m=6, max_n=7))
    def test_copeland_scores_sum_to_number_of_duels(self, election):
        m = election.num_candidates
        assert sum(copeland_scores(election).scores) == m * (m - 1) / 2

    @given(elections(min_m=2, max_m=5, max_n=6), st.randoms(use_true_random=False))
    def test_scores_follow_relabeling_and_voter_order(self, election, random):
        m, n = election.shape
        mapping = list(range(m))
        random.shuffle(mapping)
        order = list(range(n))
        random.shuffle(order)
        other = election.relabel(mapping).reorder_voters(order)
        for rule in (plurality_scores, borda_scores, copeland_scores, dodgson_winner):
            before = rule(election).scores
            after = rule(other).scores
            assert all(after[mapping[c]] == before[c] for c in range(m))

    @given(elections(min_m=2, max_m=6, max_n=7))
    def test_dodgson_is_zero_for_condorcet_winner(self, election):
        winner = condorcet_winner(election)
        if winner is not None:
            assert dodgson_score(election, winner) == 0

    def test_identity_top_candidate_needs_no_swaps(self):
        election = compass_election("ID", 6, 5, exact=True)
        assert dodgson_score(election, int(election.votes[0, 0])) == 0

    @pytest.mark.parametrize("seed", range(12))
    def test_dodgson_matches_breadth_first_search(self, seed):
        gen = np.random.default_rng(seed)
        m, n = int(gen.integers(2, 5)), int(gen.integers(1, 4))
        election = sample_election("ic", m, n, gen)
        for c in range(m):
            found = bfs_dodgson(election, c, depth=6)
            score = dodgson_score(election, c)
            if found is None:
                assert score > 6
            else:
                assert score == found

    @pytest.mark.parametrize("seed", range(10))
    def test_dodgson_matches_lift_enumeration(self, seed):
        election = sample_election("ic", 5, 7, seed)
        for c in range(5):
            assert dodgson_score(election, c) == lift_dodgson(election, c)

    def test_dodgson_budgets(self):
        with pytest.raises(BudgetExceededError):
            dodgson_score(sample_election("ic", 9, 5, 0), 0)
        with pytest.raises(BudgetExceededError):
            dodgson_score(sample_election("ic", 8, 31, 1), 7, state_budget=2)
        with pytest.raises(DomainError):
            dodgson_score(sample_election("ic", 4, 5, 0), 4)

    def test_borda_spread(self, rules_example):
        m, n = 5, 7
        assert borda_spread(compass_election("ID", m, n, exact=True)) == n * (m - 1)
        balanced = OrdinalElection.from_votes([[0, 1, 2], [1, 2, 0], [2, 0, 1]])
        assert borda_spread(balanced) == 0
        scores = borda_scores(rules_example).scores
        assert borda_spread(rules_example) == max(scores) - min(scores)


class TestCommitteeScores:
    def test_worked_example(self, committee_example):
        assert cc_score(committee_example, [0, 3]) == 12
        assert hb_score(committee_example, [0, 1]) == 13
        assert committee_score(committee_example, [0, 3], "CC") == 12.0

    def test_last_ranked_member_contributes_nothing(self):
        election = votes_from_letters("abc")
        assert cc_score(election, [2]) == 0

    def test_satisfaction_is_points_by_position(self, committee_example):
        assert satisfaction_matrix(committee_example)[3].tolist() == [0, 1, 2, 3]

    @pytest.mark.parametrize("committee", [[], [4], [-1]])
    def test_invalid_committees(self, committee_example, committee):
        with pytest.raises(DomainError):
            cc_score(committee_example, committee)

    def test_unknown_rule(self, committee_example):
        with pytest.raises(DomainError):
            committee_score(committee_example, [0], "pav")

    @given(elections(min_m=2, max_m=6, max_n=6), st.data())
    def test_scores_match_plain_loop(self, election, data):
        k = data.draw(st.integers(1, election.num_candidates))
        committee = data.draw(st.permutations(range(election.num_candidates)))[:k]
        assert cc_score(election, committee) == plain_committee_score(election, committee, "cc")
        assert hb_score(election, committee) == pytest.approx(plain_committee_score(election, committee, "hb"))


class TestExactCommittee:
    def test_worked_example(self, committee_example):
        assert exact_committee(committee_example, 2, "cc") == ((0, 3), 12.0)

    def test_full_committee(self, rules_example):
        committee, _ = exact_committee(rules_example, 5, CommitteeRule.HB)
        assert committee == (0, 1, 2, 3, 4)

    @pytest.mark.parametrize("rule", ["cc", "hb"])
    @pytest.mark.parametrize("seed", range(4))
    def test_agrees_with_reversed_enumeration(self, rule, seed):
        election = sample_election("ic", 8, 20, seed)
        committee, value = exact_committee(election, 3, rule, batch=7)
        expected, expected_value = reversed_enumeration(election, 3, rule)
        assert committee == expected
        assert value == pytest.approx(expected_value)

    def test_size_and_budget_errors(self, rules_example):
        with pytest.raises(ParameterError):
            exact_committee(rules_example, 0)
        with pytest.raises(ParameterError):
            exact_committee(rules_example, 6)
        with pytest.raises(BudgetExceededError):
            exact_committee(rules_example, 2, budget=9)


class TestApproximations:
    def test_unanimous_election_is_solved_greedily(self):
        election = compass_election("ID", 6, 4, exact=True)
        for name, (algorithm, rule) in APPROXIMATIONS.items():
            committee = algorithm(election, 2)
            assert committee_score(election, committee, rule) == exact_committee(election, 2, rule)[1], name

    @given(elections(min_m=1, max_m=6, max_n=6), st.data())
    def test_committees_are_valid(self, election, data):
        k = data.draw(st.integers(1, election.num_candidates))
        for algorithm, _ in APPROXIMATIONS.values():
            committee = algorithm(election, k)
            assert len(committee) == k == len(set(committee))
            assert list(committee) == sorted(committee)
            assert all(0 <= c < election.num_candidates for c in committee)

    @pytest.mark.parametrize("seed", range(10))
    def test_greedy_guarantee(self, seed):
        election = sample_election("ic", 8, 20, seed)
        for algorithm, rule in ((seq_cc, "cc"), (seq_hb, "hb")):
            optimum = exact_committee(election, 3, rule)[1]
            assert committee_score(election, algorithm(election, 3), rule) >= GREEDY_BOUND * optimum - 1e-12

    def test_removal_beats_sequential_on_low_dimensional_euclidean(self):
        ties_or_wins = 0
        trials = 30
        for seed in range(trials):
            election = sample_election("interval", 8, 20, seed)
            removal = cc_score(election, removal_cc(election, 3))
            greedy = cc_score(election, seq_cc(election, 3))
            ties_or_wins += removal >= greedy
        assert ties_or_wins > trials / 2

    @pytest.mark.parametrize("algorithm", [seq_cc, removal_cc, ranging_cc, banzhaf_cc])
    def test_size_errors(self, rules_example, algorithm):
        with pytest.raises(ParameterError):
            algorithm(rules_example, 0)

    @settings(max_examples=25)
    @given(elections(min_m=2, max_m=6, max_n=5), st.data())
    def test_expected_random_fill_matches_enumeration(self, election, data):
        m = election.num_candidates
        order = data.draw(st.permutations(range(m)))
        fixed = list(order[: data.draw(st.integers(1, m))])
        rest = [c for c in range(m) if c not in fixed]
        extra = data.draw(st.integers(0, len(rest)))
        sat = satisfaction_matrix(election)
        completions = list(itertools.combinations(rest, extra))
        average = np.mean([sat[:, fixed + list(c)].max(axis=1).sum() for c in completions])
        assert expected_cc_with_random_fill(sat, fixed, extra) == pytest.approx(average)

    def test_random_fill_rejects_oversized_draw(self, committee_example):
        with pytest.raises(ParameterError):
            expected_cc_with_random_fill(satisfaction_matrix(committee_example), [0], 4)
