"""Planar embeddings of distance matrices and their quality measures."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .core import DistanceMatrix
from .cultures import RngLike, as_generator
from .errors import DomainError

DEFAULT_RESTARTS = 8
DEFAULT_ITERATIONS = 300
#: Relative stress decrease below which majorization stops.
STRESS_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class Embedding:
    """Coordinates of every item plus provenance.

    Attributes:
        labels: item labels, in the order of the source distance matrix.
        points: ``(k, 2)`` array of coordinates.
        algorithm: ``"kk"``, ``"fr"`` or ``"mds"``.
        params: hyperparameters and diagnostics (for example the final stress).
    """

    labels: tuple[str, ...]
    points: np.ndarray = field(repr=False)
    algorithm: str
    params: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        points = np.array(self.points, dtype=float, copy=True).reshape(-1, 2)
        if points.shape[0] != len(self.labels):
            raise DomainError("one point per label is required")
        if not np.isfinite(points).all():
            raise DomainError("embedding coordinates must be finite")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "params", dict(self.params))

    def distances(self) -> np.ndarray:
        """Euclidean distances between all embedded points."""
        if len(self.labels) < 2:
            return np.zeros((len(self.labels), len(self.labels)))
        return squareform(pdist(self.points))


def stress(points: np.ndarray, target: np.ndarray, weights: np.ndarray | None = None) -> float:
    """``sum_{i<j} w_ij (|p_i - p_j| - d_ij)^2``."""
    k = target.shape[0]
    if k < 2:
        return 0.0
    dist = squareform(pdist(points))
    w = np.ones_like(target) if weights is None else weights
    iu = np.triu_indices(k, 1)
    return float((w[iu] * (dist[iu] - target[iu]) ** 2).sum())


def kamada_kawai_weights(target: np.ndarray) -> np.ndarray:
    """Weights ``d^-2``; coinciding items get the largest finite weight."""
    with np.errstate(divide="ignore"):
        w = np.where(target > 0, 1.0 / np.maximum(target, 1e-300) ** 2, 0.0)
    positive = w[target > 0]
    cap = positive.max() if positive.size else 1.0
    w = np.where(target > 0, w, cap)
    np.fill_diagonal(w, 0.0)
    return w


def smacof(
    target: np.ndarray,
    init: np.ndarray,
    weights: np.ndarray | None = None,
    iterations: int = DEFAULT_ITERATIONS,
    tolerance: float = STRESS_TOLERANCE,
) -> tuple[np.ndarray, list[float]]:
    """Stress majorization by repeated Guttman transforms.

    Every step minimizes a quadratic majorizer of the stress, so the returned
    stress history is non-increasing.

    Returns:
        The final configuration and the stress after each step (starting with
        the initial stress).
    """
    k = target.shape[0]
    x = np.array(init, dtype=float, copy=True)
    if k < 2:
        return x, [0.0]
    w = np.ones((k, k)) - np.eye(k) if weights is None else np.array(weights, dtype=float)
    np.fill_diagonal(w, 0.0)
    v = -w.copy()
    np.fill_diagonal(v, w.sum(axis=1))
    v_pinv = np.linalg.pinv(v)
    history = [stress(x, target, w)]
    for _ in range(iterations):
        dist = squareform(pdist(x))
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(dist > 0, w * target / dist, 0.0)
        b = -ratio
        np.fill_diagonal(b, ratio.sum(axis=1))
        candidate = v_pinv @ (b @ x)
        value = stress(candidate, target, w)
        if value > history[-1]:  # numerical noise only; keep the better configuration
            break
        x = candidate
        history.append(value)
        if history[-2] - value <= tolerance * max(history[-2], 1e-300):
            break
    return x, history


def _target(matrix: DistanceMatrix) -> np.ndarray:
    return np.asarray(matrix.values, dtype=float)


def _center(points: np.ndarray) -> np.ndarray:
    return points - points.mean(axis=0) if len(points) else points


def embed_kamada_kawai(
    matrix: DistanceMatrix,
    restarts: int = DEFAULT_RESTARTS,
    rng: RngLike = None,
    iterations: int = DEFAULT_ITERATIONS,
) -> Embedding:
    """Minimize ``sum w_ij (|p_i - p_j| - d_ij)^2`` with ``w_ij = d_ij^-2``.

    Each restart majorizes the stress from a random start drawn from a square
    of side ``max d``; the configuration with the lowest stress is returned
    (earliest restart on ties).
    """
    if restarts < 1:
        raise DomainError("at least one restart is needed")
    gen = as_generator(rng)
    target = _target(matrix)
    k = target.shape[0]
    weights = kamada_kawai_weights(target)
    scale = float(target.max()) if k > 1 and target.max() > 0 else 1.0
    best_points, best_stress = np.zeros((k, 2)), np.inf
    for _ in range(restarts):
        init = gen.uniform(0.0, scale, size=(k, 2))
        points, history = smacof(target, init, weights, iterations)
        if history[-1] < best_stress:
            best_points, best_stress = points, history[-1]
    return Embedding(
        matrix.labels,
        _center(best_points),
        "kk",
        {"restarts": restarts, "iterations": iterations, "stress": best_stress},
    )


def classical_mds(target: np.ndarray) -> np.ndarray:
    """Torgerson scaling: top two eigenvectors of the double-centred squared distances."""
    k = target.shape[0]
    if k < 2:
        return np.zeros((k, 2))
    j = np.eye(k) - np.ones((k, k)) / k
    b = -0.5 * j @ (target**2) @ j
    values, vectors = np.linalg.eigh(b)
    order = np.argsort(values)[::-1][:2]
    coords = vectors[:, order] * np.sqrt(np.maximum(values[order], 0.0))
    # fix the sign of each axis so the output does not depend on the eigensolver
    for axis in range(coords.shape[1]):
        pivot = np.argmax(np.abs(coords[:, axis]))
        if coords[pivot, axis] < 0:
            coords[:, axis] *= -1
    if coords.shape[1] < 2:
        coords = np.hstack([coords, np.zeros((k, 2 - coords.shape[1]))])
    return coords


def embed_mds_smacof(matrix: DistanceMatrix, iterations: int = DEFAULT_ITERATIONS) -> Embedding:
    """Metric MDS: unweighted stress majorization started from classical scaling."""
    target = _target(matrix)
    init = classical_mds(target)
    points, history = smacof(target, init, None, iterations)
    return Embedding(
        matrix.labels,
        _center(points),
        "mds",
        {"iterations": iterations, "stress": history[-1], "steps": len(history) - 1},
    )


def embed_fruchterman_reingold(
    matrix: DistanceMatrix,
    iterations: int = 500,
    rng: RngLike = None,
    initial_temperature: float = 0.1,
) -> Embedding:
    """Force-directed layout with a linear cooling schedule.

    Distances are rescaled so the largest equals 1 and serve as desired edge
    lengths ``l_ij`` of a complete graph.  Item ``i`` is pulled towards ``j``
    by ``r^2 / l_ij`` and pushed away by ``l_ij^2 / r`` where ``r`` is their
    current distance; the forces balance at ``r = l_ij``.  Each step moves a
    point by at most the current temperature, which decreases linearly from
    ``initial_temperature`` to zero.
    """
    gen = as_generator(rng)
    target = _target(matrix)
    k = target.shape[0]
    top = float(target.max()) if k > 1 else 0.0
    if k < 2 or top == 0.0:
        return Embedding(matrix.labels, np.zeros((k, 2)), "fr", {"iterations": iterations})
    ideal = target / top
    floor = 1e-3 * float(ideal[ideal > 0].min())
    ideal_safe = np.maximum(ideal, floor)
    pos = gen.uniform(0.0, 1.0, size=(k, 2))
    for step in range(iterations):
        temperature = initial_temperature * (1.0 - step / iterations)
        delta = pos[:, None, :] - pos[None, :, :]
        dist = np.linalg.norm(delta, axis=2)
        np.fill_diagonal(dist, 1.0)
        dist = np.maximum(dist, 1e-9)
        repulse = ideal**2 / dist
        attract = dist**2 / ideal_safe
        magnitude = repulse - attract
        np.fill_diagonal(magnitude, 0.0)
        force = (magnitude / dist)[:, :, None] * delta
        move = force.sum(axis=1)
        length = np.linalg.norm(move, axis=1)
        limited = np.minimum(length, temperature)
        with np.errstate(invalid="ignore", divide="ignore"):
            move = np.where(length[:, None] > 0, move * (limited / length)[:, None], 0.0)
        pos = pos + move
    return Embedding(
        matrix.labels,
        _center(pos * top),
        "fr",
        {"iterations": iterations, "initial_temperature": initial_temperature},
    )


EMBEDDINGS = {
    "kk": embed_kamada_kawai,
    "fr": embed_fruchterman_reingold,
    "mds": embed_mds_smacof,
}


def embed(matrix: DistanceMatrix, algorithm: str = "kk", rng: RngLike = None, **kwargs) -> Embedding:
    """Dispatch by algorithm name (``kk``, ``fr`` or ``mds``)."""
    name = algorithm.strip().lower()
    if name not in EMBEDDINGS:
        raise DomainError(f"unknown embedding {algorithm!r}; expected one of {tuple(EMBEDDINGS)}")
    if name == "mds":
        return embed_mds_smacof(matrix, **kwargs)
    return EMBEDDINGS[name](matrix, rng=rng, **kwargs)


# ---------------------------------------------------------------------------
# Quality measures
# ---------------------------------------------------------------------------


def _check_pair(matrix: DistanceMatrix, embedding: Embedding) -> None:
    if tuple(matrix.labels) != tuple(embedding.labels):
        raise DomainError("embedding and distance matrix must list the same labels in the same order")


def monotonicity(matrix: DistanceMatrix, embedding: Embedding, epsilon: float = 0.0) -> tuple[np.ndarray, float]:
    """Fraction of ordered pairs ``(Y, Z)`` whose comparison with ``X`` survives the embedding.

    A pair counts when the original and embedded differences have the same
    sign, or when the embedded difference is at most ``epsilon`` times the
    smaller embedded distance.  Ordered pairs with ``Y != Z`` and both distinct
    from ``X`` are averaged.

    Returns:
        Per-item values and their mean.
    """
    if epsilon < 0:
        raise DomainError("epsilon must be nonnegative")
    _check_pair(matrix, embedding)
    orig = _target(matrix)
    emb = embedding.distances()
    k = orig.shape[0]
    values = np.ones(k)
    if k < 3:
        return values, 1.0
    for x in range(k):
        others = np.array([y for y in range(k) if y != x])
        do = orig[x, others]
        de = emb[x, others]
        diff_o = do[:, None] - do[None, :]
        diff_e = de[:, None] - de[None, :]
        agree = np.sign(diff_o) == np.sign(diff_e)
        close = np.abs(diff_e) <= epsilon * np.minimum(de[:, None], de[None, :])
        ok = agree | close
        off = ~np.eye(len(others), dtype=bool)
        values[x] = ok[off].mean()
    return values, float(values.mean())


def _normalizer(matrix: DistanceMatrix, distances: np.ndarray, reference: tuple[str, str] | None) -> float:
    if reference is not None:
        a, b = reference
        return float(distances[matrix.index(a), matrix.index(b)])
    return float(distances.max())


def distortion(
    matrix: DistanceMatrix,
    embedding: Embedding,
    reference: tuple[str, str] | None | str = "auto",
) -> tuple[np.ndarray, float]:
    """Per-item mean ratio of normalized embedded and original distances (max over min).

    Both distance sets are divided by the distance between the ``reference``
    labels (``("ID", "UN")`` when ``"auto"`` and both labels exist) or by their
    maximum when there is no reference.  A pair normalized to zero in exactly
    one space has an infinite ratio; a pair at zero in both has ratio 1.

    Returns:
        Per-item values (mean over the other items) and their mean.
    """
    _check_pair(matrix, embedding)
    if reference == "auto":
        reference = ("ID", "UN") if {"ID", "UN"} <= set(matrix.labels) else None
    orig = _target(matrix)
    emb = embedding.distances()
    k = orig.shape[0]
    if k < 2:
        return np.ones(k), 1.0
    norm_o = _normalizer(matrix, orig, reference)
    norm_e = _normalizer(matrix, emb, reference)
    if norm_o <= 0 or norm_e <= 0:
        raise DomainError("the normalizing distance is zero")
    a = orig / norm_o
    b = emb / norm_e
    hi = np.maximum(a, b)
    lo = np.minimum(a, b)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(hi == 0, 1.0, hi / lo)
    off = ~np.eye(k, dtype=bool)
    values = np.array([ratio[x][off[x]].mean() for x in range(k)])
    return values, float(values.mean())
