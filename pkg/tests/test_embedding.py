import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.spatial.distance import pdist, squareform

from electionmap.core import DistanceMatrix
from electionmap.embedding import (
    EMBEDDINGS,
    Embedding,
    classical_mds,
    distortion,
    embed,
    embed_kamada_kawai,
    kamada_kawai_weights,
    monotonicity,
    smacof,
    stress,
)
from electionmap.errors import DomainError


def planar_matrix(points, labels=None):
    labels = labels or tuple(f"p{i}" for i in range(len(points)))
    return DistanceMatrix(tuple(labels), squareform(pdist(points)))


def loop_monotonicity(orig, emb, epsilon=0.0):
    k = orig.shape[0]
    per_item = []
    for x in range(k):
        good = total = 0
        for y, z in itertools.permutations([i for i in range(k) if i != x], 2):
            total += 1
            same = np.sign(orig[x, y] - orig[x, z]) == np.sign(emb[x, y] - emb[x, z])
            close = abs(emb[x, y] - emb[x, z]) <= epsilon * min(emb[x, y], emb[x, z])
            good += bool(same or close)
        per_item.append(good / total)
    return per_item


def loop_distortion(orig, emb, scale_o, scale_e):
    k = orig.shape[0]
    per_item = []
    for x in range(k):
        ratios = []
        for y in range(k):
            if y == x:
                continue
            a, b = orig[x, y] / scale_o, emb[x, y] / scale_e
            ratios.append(1.0 if max(a, b) == 0 else max(a, b) / min(a, b) if min(a, b) > 0 else np.inf)
        per_item.append(np.mean(ratios))
    return per_item


point_clouds = arrays(
    np.float64,
    st.tuples(st.integers(3, 8), st.just(2)),
    elements=st.floats(-10, 10, allow_nan=False),
    unique=True,
)


class TestMajorization:
    def test_stress_zero_on_exact_configuration(self, rng):
        points = rng.random((6, 2))
        assert stress(points, squareform(pdist(points))) == pytest.approx(0, abs=1e-20)

    def test_stress_history_never_increases(self, rng):
        target = squareform(pdist(rng.random((10, 3))))
        _, history = smacof(target, rng.random((10, 2)), kamada_kawai_weights(target))
        assert all(b <= a + 1e-12 for a, b in zip(history, history[1:]))

    def test_weights(self):
        target = np.array([[0.0, 2.0, 0.0], [2.0, 0.0, 4.0], [0.0, 4.0, 0.0]])
        weights = kamada_kawai_weights(target)
        assert weights[0, 1] == pytest.approx(0.25)
        assert weights[1, 2] == pytest.approx(1 / 16)
        assert weights[0, 2] == pytest.approx(0.25)
        assert np.diag(weights).tolist() == [0, 0, 0]

    @given(point_clouds)
    def test_classical_scaling_recovers_planar_distances(self, points):
        target = squareform(pdist(points))
        coords = classical_mds(target)
        np.testing.assert_allclose(squareform(pdist(coords)), target, atol=1e-6 * max(1.0, target.max()))


class TestEmbeddings:
    @pytest.mark.parametrize("algorithm", ["kk", "mds"])
    def test_planar_points_are_embedded_faithfully(self, algorithm, rng):
        matrix = planar_matrix(rng.random((20, 2)))
        embedding = embed(matrix, algorithm, rng=1)
        assert monotonicity(matrix, embedding)[1] >= 0.99
        assert distortion(matrix, embedding)[1] <= 1.05

    def test_force_directed_layout_is_reasonable(self, rng):
        matrix = planar_matrix(rng.random((15, 2)))
        embedding = embed(matrix, "fr", rng=2)
        assert embedding.algorithm == "fr"
        assert monotonicity(matrix, embedding)[1] > 0.8

    @pytest.mark.parametrize("algorithm", sorted(EMBEDDINGS))
    def test_determinism(self, algorithm, rng):
        matrix = planar_matrix(rng.random((8, 2)))
        first = embed(matrix, algorithm, rng=7)
        second = embed(matrix, algorithm, rng=7)
        assert first.points.tobytes() == second.points.tobytes()
        assert first.labels == matrix.labels

    @pytest.mark.parametrize("algorithm", sorted(EMBEDDINGS))
    @pytest.mark.parametrize("size", [1, 2])
    def test_tiny_inputs(self, algorithm, size):
        matrix = DistanceMatrix(tuple("ab"[:size]), np.eye(size)[::-1] * (size - 1))
        assert embed(matrix, algorithm, rng=0).points.shape == (size, 2)

    def test_restarts_keep_the_lowest_stress(self, rng):
        matrix = DistanceMatrix(tuple("abcdef"), squareform(pdist(rng.random((6, 5)))))
        single = embed_kamada_kawai(matrix, restarts=1, rng=3)
        several = embed_kamada_kawai(matrix, restarts=6, rng=3)
        assert several.params["stress"] <= single.params["stress"] + 1e-12

    def test_errors(self):
        matrix = planar_matrix(np.eye(3)[:, :2])
        with pytest.raises(DomainError):
            embed(matrix, "tsne")
        with pytest.raises(DomainError):
            embed_kamada_kawai(matrix, restarts=0)
        with pytest.raises(DomainError):
            Embedding(("a",), np.zeros((2, 2)), "kk")
        with pytest.raises(DomainError):
            Embedding(("a",), np.array([[np.nan, 0.0]]), "kk")


class TestQuality:
    @given(point_clouds, st.floats(0, 0.3))
    def test_monotonicity_matches_loop(self, points, epsilon):
        orig = squareform(pdist(points))
        labels = tuple(f"p{i}" for i in range(len(points)))
        noisy = points + np.sin(np.arange(points.size)).reshape(points.shape)
        embedding = Embedding(labels, noisy, "kk")
        values, mean = monotonicity(DistanceMatrix(labels, orig), embedding, epsilon)
        np.testing.assert_allclose(values, loop_monotonicity(orig, embedding.distances(), epsilon))
        assert mean == pytest.approx(np.mean(values))

    @given(point_clouds)
    def test_distortion_matches_loop(self, points):
        orig = squareform(pdist(points))
        labels = tuple(f"p{i}" for i in range(len(points)))
        stretched = points * np.array([1.0, 1.7])
        embedding = Embedding(labels, stretched, "mds")
        values, mean = distortion(DistanceMatrix(labels, orig), embedding, reference=None)
        emb = embedding.distances()
        np.testing.assert_allclose(values, loop_distortion(orig, emb, orig.max(), emb.max()))
        assert mean >= 1.0

    def test_isometry_is_perfect(self, rng):
        points = rng.random((7, 2))
        matrix = planar_matrix(points)
        rotation = np.array([[0.0, -1.0], [1.0, 0.0]])
        embedding = Embedding(matrix.labels, 3.0 * points @ rotation + 5.0, "kk")
        assert monotonicity(matrix, embedding)[1] == 1.0
        assert distortion(matrix, embedding)[1] == pytest.approx(1.0)

    def test_compass_reference(self):
        points = np.array([[0.0, 0.0], [2.0, 0.0], [0.0, 1.0]])
        matrix = planar_matrix(points, ("ID", "UN", "X"))
        embedding = Embedding(matrix.labels, points * np.array([1.0, 2.0]), "kk")
        values, _ = distortion(matrix, embedding)
        assert values[0] == pytest.approx((1.0 + 2.0) / 2)

    def test_errors(self):
        matrix = planar_matrix(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))
        wrong = Embedding(("x", "y", "z"), np.zeros((3, 2)), "kk")
        with pytest.raises(DomainError):
            monotonicity(matrix, wrong)
        with pytest.raises(DomainError):
            monotonicity(matrix, Embedding(matrix.labels, np.zeros((3, 2)), "kk"), epsilon=-1)
        with pytest.raises(DomainError):
            distortion(matrix, Embedding(matrix.labels, np.zeros((3, 2)), "kk"))
