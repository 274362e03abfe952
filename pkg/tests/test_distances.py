import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import linear_sum_assignment

from electionmap.core import OrdinalElection, borda_vector, frequency_matrix, pairwise_matrix
from electionmap.cultures import compass_election, sample_election
from electionmap.distances import (
    MatchingConstraint,
    bordawise_distance,
    iso_distance,
    iso_distance_witness,
    kemeny_ranking,
    pairwise_distance,
    positionwise_distance,
    vote_distance,
)
from electionmap.distances.classes import count_equivalence_classes
from electionmap.distances.matrix import (
    METRIC_NAMES,
    ElectionMetric,
    canonical_metric,
    distance_matrix,
    id_un_distance,
    normalize_distances,
)
from electionmap.distances.votes import vote_distance_matrix
from electionmap.errors import BudgetExceededError, DomainError, SizeMismatchError

from .conftest import election_pairs, elections, votes_from_letters


def brute_iso(metric, e1, e2):
    """Enumerate every candidate bijection; voters matched by an assignment solver."""
    best = None
    for sigma in itertools.permutations(range(e1.num_candidates)):
        renamed = np.asarray(sigma)[e1.votes]
        cost = vote_distance_matrix(metric, OrdinalElection(e1.num_candidates, renamed).positions, e2.positions)
        rows, cols = linear_sum_assignment(cost)
        value = int(cost[rows, cols].sum())
        best = value if best is None else min(best, value)
    return best


def brute_positionwise(e1, e2, norm="emd"):
    x, y = frequency_matrix(e1), frequency_matrix(e2)
    if norm == "emd":
        x, y = np.cumsum(x, axis=0), np.cumsum(y, axis=0)
    m = e1.num_candidates
    return min(sum(np.abs(x[:, c] - y[:, s[c]]).sum() for c in range(m)) for s in itertools.permutations(range(m)))


def brute_pairwise(e1, e2):
    a, b = pairwise_matrix(e1), pairwise_matrix(e2)
    m = e1.num_candidates
    return min(int(np.abs(a - b[np.ix_(s, s)]).sum()) for s in map(list, itertools.permutations(range(m))))


class TestVoteDistances:
    U, V = (0, 1, 2, 3, 4), (1, 0, 4, 2, 3)

    @pytest.mark.parametrize("metric, expected", [("swap", 3), ("spearman", 6), ("discrete", 1)])
    def test_worked_pair(self, metric, expected):
        assert vote_distance(metric, self.U, self.V) == expected

    def test_discrete_identical(self):
        assert vote_distance("discrete", self.U, self.U) == 0

    @given(st.integers(1, 7).flatmap(lambda m: st.tuples(*[st.permutations(range(m))] * 3)))
    def test_metric_axioms(self, votes):
        u, v, w = votes
        for metric in ("swap", "spearman", "discrete"):
            assert vote_distance(metric, u, v) == vote_distance(metric, v, u)
            assert vote_distance(metric, u, w) <= vote_distance(metric, u, v) + vote_distance(metric, v, w)
            assert (vote_distance(metric, u, v) == 0) == (tuple(u) == tuple(v))

    @given(st.integers(1, 7).flatmap(lambda m: st.tuples(st.permutations(range(m)), st.permutations(range(m)))))
    def test_spearman_bounds_swap(self, pair):
        # Diaconis-Graham: swap <= footrule <= 2 swap
        u, v = pair
        s, f = vote_distance("swap", u, v), vote_distance("spearman", u, v)
        assert s <= f <= 2 * s

    def test_rejects_mismatched_votes(self):
        with pytest.raises(SizeMismatchError):
            vote_distance("swap", (0, 1), (0, 1, 2))


class TestIsomorphic:
    def test_renamed_elections_are_at_distance_zero(self):
        animals = votes_from_letters("psr", "spr", "rsp", alphabet="psr")
        food = votes_from_letters("rsp", "psr", "spr", alphabet="psr")
        for metric in ("swap", "spearman", "discrete"):
            assert iso_distance(metric, animals.relabel([2, 0, 1]), food) == 0
        for fn in (positionwise_distance, pairwise_distance, bordawise_distance):
            assert fn(animals.relabel([2, 0, 1]), food) == 0

    @given(election_pairs(max_m=5, max_n=5))
    def test_branch_and_bound_matches_enumeration(self, pair):
        e1, e2 = pair
        for metric in ("swap", "spearman"):
            expected = brute_iso(metric, e1, e2)
            assert iso_distance(metric, e1, e2, method="brute") == expected
            assert iso_distance(metric, e1, e2, method="bnb") == expected

    @given(election_pairs(max_m=4, max_n=5))
    def test_discrete_matches_enumeration(self, pair):
        e1, e2 = pair
        assert iso_distance("discrete", e1, e2) == brute_iso("discrete", e1, e2)

    @given(election_pairs(max_m=5, max_n=5), st.randoms(use_true_random=False))
    def test_invariant_under_renaming(self, pair, random):
        e1, e2 = pair
        sigma = list(range(e1.num_candidates))
        order = list(range(e1.num_voters))
        random.shuffle(sigma)
        random.shuffle(order)
        other = e1.relabel(sigma).reorder_voters(order)
        for metric in ("swap", "spearman", "discrete"):
            assert iso_distance(metric, other, e2) == iso_distance(metric, e1, e2)
            assert iso_distance(metric, e1, other) == 0

    @given(election_pairs(min_m=2, max_m=5, max_n=5))
    def test_witness_achieves_value(self, pair):
        e1, e2 = pair
        for metric in ("swap", "spearman", "discrete"):
            result = iso_distance_witness(metric, e1, e2)
            total = sum(
                vote_distance(metric, [result.candidate_map[c] for c in e1.vote(i)], e2.vote(result.voter_map[i]))
                for i in range(e1.num_voters)
            )
            assert total == result.distance

    def test_fixed_matchings(self):
        e1 = votes_from_letters("abc", "cba")
        e2 = votes_from_letters("cba", "abc")
        both = MatchingConstraint(candidate_map=(0, 1, 2), voter_map=(0, 1))
        assert iso_distance("swap", e1, e2, both) == 6
        assert iso_distance("swap", e1, e2, MatchingConstraint(candidate_map=(0, 1, 2))) == 0
        assert iso_distance("swap", e1, e2, MatchingConstraint(voter_map=(0, 1))) == 0

    def test_size_mismatch(self):
        with pytest.raises(SizeMismatchError):
            iso_distance("swap", votes_from_letters("ab"), votes_from_letters("ab", "ba"))

    def test_candidate_cap(self):
        e = sample_election("ic", 9, 3, 0)
        with pytest.raises(BudgetExceededError):
            iso_distance("swap", e, e)

    def test_node_budget(self):
        e1, e2 = sample_election("ic", 7, 12, 1), sample_election("ic", 7, 12, 2)
        with pytest.raises(BudgetExceededError):
            iso_distance("swap", e1, e2, node_budget=1)

    @pytest.mark.parametrize("metric", ["swap", "spearman"])
    def test_identical_target_uses_consensus(self, metric):
        e1 = sample_election("ic", 6, 9, 3)
        target = compass_election("ID", 6, 9, 0)
        assert iso_distance(metric, e1, target) == iso_distance(metric, e1, target, method="bnb")


class TestKemeny:
    @given(elections(max_m=5, max_n=6))
    def test_matches_enumeration(self, e):
        score, ranking = kemeny_ranking(e)
        costs = {
            order: sum(vote_distance("swap", order, v) for v in e.vote_list())
            for order in itertools.permutations(range(e.num_candidates))
        }
        assert score == min(costs.values()) == costs[ranking]


class TestNonIsomorphic:
    def test_worked_pair(self, positionwise_example):
        e1, e2 = positionwise_example
        assert positionwise_distance(e1, e2, form="counts") == 2
        assert pairwise_distance(e1, e2) == 2
        assert bordawise_distance(e1, e2) == 2
        assert borda_vector(e1).tolist() == [3, 5, 1]

    def test_compass_identity_uniformity(self):
        idn = compass_election("ID", 4, 24, exact=True)
        un = compass_election("UN", 4, 24, exact=True)
        assert positionwise_distance(idn, un) == pytest.approx(5)
        assert pairwise_distance(idn, un, normalized=True) == pytest.approx(6)
        assert bordawise_distance(idn, un, normalized=True) == pytest.approx(5)

    @given(election_pairs(max_m=5, max_n=5))
    def test_positionwise_matches_enumeration(self, pair):
        e1, e2 = pair
        assert positionwise_distance(e1, e2) == pytest.approx(brute_positionwise(e1, e2))
        assert positionwise_distance(e1, e2, "l1") == pytest.approx(brute_positionwise(e1, e2, "l1"))

    @given(election_pairs(max_m=5, max_n=5))
    def test_pairwise_matches_enumeration(self, pair):
        e1, e2 = pair
        assert pairwise_distance(e1, e2) == brute_pairwise(e1, e2)

    @given(st.integers(2, 5).flatmap(lambda m: st.tuples(*[elections(m=m, n=4)] * 3)))
    def test_triangle_inequality(self, triple):
        a, b, c = triple
        for fn in (positionwise_distance, pairwise_distance, bordawise_distance):
            assert fn(a, c) <= fn(a, b) + fn(b, c) + 1e-9
            assert fn(a, b) == pytest.approx(fn(b, a))

    def test_positionwise_accepts_different_voter_counts(self):
        a, b = sample_election("ic", 4, 6, 0), sample_election("ic", 4, 9, 1)
        assert positionwise_distance(a, b) >= 0
        with pytest.raises(SizeMismatchError):
            positionwise_distance(a, b, form="counts")
        with pytest.raises(SizeMismatchError):
            pairwise_distance(a, b)

    def test_candidate_count_mismatch(self):
        with pytest.raises(SizeMismatchError):
            bordawise_distance(sample_election("ic", 4, 6, 0), sample_election("ic", 5, 6, 0))


class TestEquivalenceClasses:
    @pytest.mark.parametrize(
        "m, n, metric, expected",
        [
            (3, 3, "anec", 10),
            (3, 3, "positionwise", 10),
            (3, 3, "pairwise", 8),
            (3, 3, "bordawise", 8),
            (3, 4, "anec", 24),
            (2, 5, "anec", 3),
        ],
    )
    def test_small_tables(self, m, n, metric, expected):
        assert count_equivalence_classes(m, n, metric) == expected

    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            count_equivalence_classes(6, 10, "anec")

    def test_ordering_of_class_counts(self):
        # distances that forget more information can only merge classes
        counts = {k: count_equivalence_classes(3, 4, k) for k in ("anec", "positionwise", "pairwise", "bordawise")}
        assert counts["anec"] >= counts["positionwise"] >= counts["bordawise"]
        assert counts["anec"] >= counts["pairwise"] >= counts["bordawise"]


class TestMatrices:
    def test_names(self):
        assert canonical_metric("EMD_Pos") == "emd-positionwise"
        with pytest.raises(DomainError):
            canonical_metric("unknown")

    def test_distance_matrix_is_symmetric(self):
        es = [sample_election("ic", 4, 5, s) for s in range(4)]
        d = distance_matrix(es, "bordawise", labels="abcd")
        assert np.allclose(d.values, d.values.T)
        assert d.get("a", "c") == bordawise_distance(es[0], es[2])

    @pytest.mark.parametrize("metric", METRIC_NAMES)
    def test_identity_uniformity_normalizer(self, metric):
        m, n = 4, 24
        idn, un = compass_election("ID", m, n, exact=True), compass_election("UN", m, n, exact=True)
        assert ElectionMetric(metric)(idn, un) == pytest.approx(id_un_distance(metric, m, n))

    def test_normalize(self):
        es = [compass_election("ID", 4, 24, exact=True), compass_election("UN", 4, 24, exact=True)]
        d = normalize_distances(distance_matrix(es, "swap"), "swap", 4, 24)
        assert d.values[0, 1] == pytest.approx(1.0)
