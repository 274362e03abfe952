import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import pearsonr

from electionmap.core import (
    ApprovalElection,
    DistanceMatrix,
    OrdinalElection,
    borda_vector,
    emd,
    frequency_matrix,
    l1,
    pairwise_matrix,
    pcc,
    position_matrix,
    realize_from_position_matrix,
    validate_order,
)
from electionmap.errors import DomainError, SizeMismatchError, UndefinedCorrelationError

from .conftest import elections, votes_from_letters


@pytest.fixture
def aggregate_example():
    return votes_from_letters("abc", "bca", "bac", "cab")


def greedy_emd(x, y):
    """Move surplus mass one step at a time to the right; independent EMD oracle."""
    x = list(map(float, x))
    y = list(map(float, y))
    cost = 0.0
    carry = 0.0
    for a, b in zip(x, y):
        carry += a - b
        cost += abs(carry)
    return cost - abs(carry)


class TestOrdinalElection:
    def test_rejects_non_permutation(self):
        with pytest.raises(DomainError):
            OrdinalElection.from_votes([[0, 0, 1]])

    @pytest.mark.parametrize("votes", [np.zeros((0, 3), dtype=int), np.zeros((2, 2, 2), dtype=int)])
    def test_rejects_bad_shapes(self, votes):
        with pytest.raises(DomainError):
            OrdinalElection(3, votes)

    def test_votes_are_read_only(self):
        e = OrdinalElection.from_votes([[0, 1], [1, 0]])
        with pytest.raises(ValueError):
            e.votes[0, 0] = 1

    def test_shape_is_candidates_then_voters(self):
        assert OrdinalElection.from_votes([[0, 1, 2]] * 4).shape == (3, 4)

    def test_restrict_renumbers_by_rank(self):
        e = OrdinalElection.from_votes([[3, 1, 0, 2]])
        assert e.restrict([3, 0]).vote(0) == (1, 0)

    def test_relabel_and_equality(self):
        e = OrdinalElection.from_votes([[0, 1, 2], [2, 1, 0]])
        assert e.relabel([2, 1, 0]) == OrdinalElection.from_votes([[2, 1, 0], [0, 1, 2]])
        assert hash(e) == hash(OrdinalElection.from_votes(e.vote_list()))

    def test_validate_order(self):
        assert validate_order([2, 0, 1], 3) == (2, 0, 1)
        with pytest.raises(DomainError):
            validate_order([0, 1], 3)


class TestAggregates:
    def test_position_matrix_example(self, aggregate_example):
        p = position_matrix(aggregate_example)
        assert p[:, 0].tolist() == [1, 2, 1]
        assert p[:, 1].tolist() == [2, 1, 1]
        assert p[:, 2].tolist() == [1, 1, 2]

    def test_pairwise_matrix_example(self, aggregate_example):
        assert pairwise_matrix(aggregate_example)[1, 2] == 3
        assert pairwise_matrix(aggregate_example, normalized=True)[1, 2] == pytest.approx(0.75)

    def test_borda_vector_example(self, aggregate_example):
        assert borda_vector(aggregate_example).tolist() == [4, 5, 3]

    def test_identity_frequency_matrix(self):
        e = OrdinalElection.from_votes([[0, 1, 2, 3]] * 5)
        assert np.array_equal(frequency_matrix(e), np.eye(4))

    @given(elections(max_m=6, max_n=8))
    def test_frequency_matrix_is_bistochastic(self, e):
        f = frequency_matrix(e)
        assert np.allclose(f.sum(axis=0), 1) and np.allclose(f.sum(axis=1), 1)

    @given(elections(min_m=2, max_m=6, max_n=8))
    def test_pairwise_matrix_complements(self, e):
        m, n = e.shape
        wins = pairwise_matrix(e)
        off = ~np.eye(m, dtype=bool)
        assert np.array_equal((wins + wins.T)[off], np.full(m * (m - 1), n))

    @given(elections(max_m=6, max_n=8))
    def test_borda_total_and_per_vote_oracle(self, e):
        m, n = e.shape
        scores = borda_vector(e)
        assert scores.sum() == n * m * (m - 1) // 2
        oracle = np.zeros(m, dtype=int)
        for vote in e.vote_list():
            for pos, c in enumerate(vote):
                oracle[c] += m - 1 - pos
        assert np.array_equal(scores, oracle)


class TestVectors:
    @pytest.mark.parametrize(
        "x, y, expected",
        [((2, 1, 0), (1, 2, 0), 1), ((5, 3, 1), (4, 3, 2), 2), ((1, 0, 0), (0, 0, 1), 2), ((0.5, 0.5), (0.5, 0.5), 0)],
    )
    def test_emd_examples(self, x, y, expected):
        assert emd(x, y) == pytest.approx(expected)

    def test_emd_requires_equal_mass(self):
        with pytest.raises(DomainError):
            emd((1, 0), (1, 1))

    def test_emd_rejects_negative_entries(self):
        with pytest.raises(DomainError):
            emd((2, -1), (0, 1))

    def test_length_mismatch(self):
        with pytest.raises(SizeMismatchError):
            l1((1, 2), (1, 2, 3))

    @given(st.lists(st.integers(0, 9), min_size=1, max_size=8).flatmap(
        lambda xs: st.tuples(st.just(xs), st.permutations(xs))))
    def test_emd_matches_greedy_transport(self, pair):
        x, y = pair
        assert emd(x, y) == pytest.approx(greedy_emd(x, y))

    @given(st.lists(st.floats(-100, 100), min_size=3, max_size=20))
    def test_pcc_matches_scipy(self, xs):
        x = np.array(xs)
        y = x**2 + np.arange(len(x))
        if np.ptp(x) < 1e-6 or np.ptp(y) < 1e-6:
            return
        assert pcc(x, y) == pytest.approx(pearsonr(x, y)[0], abs=1e-9)

    def test_pcc_constant_vector(self):
        with pytest.raises(UndefinedCorrelationError):
            pcc([1, 1, 1], [1, 2, 3])


class TestRealization:
    def test_permutation_matrix_gives_one_repeated_vote(self):
        counts = np.eye(3, dtype=int)[[2, 0, 1]] * 4
        e = realize_from_position_matrix(counts)
        assert set(e.vote_list()) == {tuple(np.argmax(counts, axis=1))}
        assert e.num_voters == 4

    def test_example_matrix(self, aggregate_example):
        p = position_matrix(aggregate_example)
        assert np.array_equal(position_matrix(realize_from_position_matrix(p)), p)

    @given(elections(max_m=6, max_n=10))
    def test_round_trip(self, e):
        p = position_matrix(e)
        assert np.array_equal(position_matrix(realize_from_position_matrix(p)), p)

    def test_rejects_non_bistochastic(self):
        with pytest.raises(DomainError):
            realize_from_position_matrix([[1, 0], [1, 1]])


class TestApprovalElection:
    def test_matrix_and_scores(self):
        e = ApprovalElection(3, ({0, 2}, set(), {2}))
        assert e.matrix.tolist() == [[True, False, True], [False, False, False], [False, False, True]]
        assert e.approval_scores().tolist() == [1, 0, 2]
        assert ApprovalElection.from_matrix(e.matrix) == e

    def test_rejects_foreign_candidate(self):
        with pytest.raises(DomainError):
            ApprovalElection(2, ({0, 2},))


class TestDistanceMatrix:
    def test_validation(self):
        with pytest.raises(DomainError):
            DistanceMatrix(("a", "b"), [[0, 1], [2, 0]])
        with pytest.raises(DomainError):
            DistanceMatrix(("a", "a"), [[0, 1], [1, 0]])
        with pytest.raises(DomainError):
            DistanceMatrix(("a", "b"), [[1, 1], [1, 0]])

    def test_lookup_and_condensed(self):
        d = DistanceMatrix(("a", "b", "c"), [[0, 1, 2], [1, 0, 3], [2, 3, 0]])
        assert d.get("c", "b") == 3
        assert d.condensed().tolist() == [1, 2, 3]
