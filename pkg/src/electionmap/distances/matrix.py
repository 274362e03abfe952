"""Election metrics by name, distance matrices over datasets and normalization."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..core import DistanceMatrix, OrdinalElection
from ..errors import DomainError
from .isomorphic import DEFAULT_MAX_CANDIDATES, iso_distance
from .nonisomorphic import DEFAULT_PAIRWISE_MAX_CANDIDATES, bordawise_distance, pairwise_distance, positionwise_distance

METRIC_NAMES = (
    "swap",
    "spearman",
    "discrete",
    "emd-positionwise",
    "l1-positionwise",
    "pairwise",
    "bordawise",
)

_ALIASES = {
    "positionwise": "emd-positionwise",
    "emd-pos": "emd-positionwise",
    "l1-pos": "l1-positionwise",
    "l1-pairwise": "pairwise",
    "pair": "pairwise",
    "emd-bordawise": "bordawise",
    "borda": "bordawise",
    "disc": "discrete",
    "isomorphic-swap": "swap",
    "isomorphic-spearman": "spearman",
}


def canonical_metric(name: str) -> str:
    key = str(name).strip().lower().replace("_", "-")
    key = _ALIASES.get(key, key)
    if key not in METRIC_NAMES:
        raise DomainError(f"unknown election metric {name!r}; expected one of {METRIC_NAMES}")
    return key


@dataclass(frozen=True)
class ElectionMetric:
    """A named election distance with its computational budget.

    Attributes:
        name: one of :data:`METRIC_NAMES` (aliases accepted).
        max_candidates: cap for the exponential exact searches.
        node_budget: optional cap on branch-and-bound nodes.
    """

    name: str
    max_candidates: int | None = None
    node_budget: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "name", canonical_metric(self.name))

    def __call__(self, e1: OrdinalElection, e2: OrdinalElection) -> float:
        name = self.name
        if name in ("swap", "spearman", "discrete"):
            cap = self.max_candidates or DEFAULT_MAX_CANDIDATES
            return float(iso_distance(name, e1, e2, max_candidates=cap, node_budget=self.node_budget))
        if name == "emd-positionwise":
            return positionwise_distance(e1, e2, "emd", "frequency")
        if name == "l1-positionwise":
            return positionwise_distance(e1, e2, "l1", "frequency")
        if name == "pairwise":
            cap = self.max_candidates or DEFAULT_PAIRWISE_MAX_CANDIDATES
            return pairwise_distance(e1, e2, max_candidates=cap, node_budget=self.node_budget)
        return bordawise_distance(e1, e2)


def distance_matrix(
    elections: Sequence[OrdinalElection],
    metric: ElectionMetric | str | Callable[[OrdinalElection, OrdinalElection], float],
    labels: Sequence[str] | None = None,
) -> DistanceMatrix:
    """All pairwise distances of a dataset.

    Each unordered pair is computed once, in row-major order, and mirrored.

    Args:
        metric: a metric name, an :class:`ElectionMetric` or any callable.
        labels: item labels; defaults to ``"0"``, ``"1"``, ...
    """
    if isinstance(metric, str):
        metric = ElectionMetric(metric)
    k = len(elections)
    labels = [str(i) for i in range(k)] if labels is None else [str(x) for x in labels]
    values = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            values[i, j] = values[j, i] = float(metric(elections[i], elections[j]))
    return DistanceMatrix(tuple(labels), values)


def id_un_distance(metric: str, m: int, n: int) -> float:
    """Distance between identity and (ideal) uniformity, the usual normalizing constant.

    Conventions follow :class:`ElectionMetric`: positionwise on frequency
    matrices, pairwise and Bordawise on counts, isomorphic metrics as totals
    over ``n`` voters.
    """
    name = canonical_metric(metric)
    if name == "swap":
        return n * m * (m - 1) / 4
    if name == "spearman":
        return n * (m * m - 1) / 3
    if name == "discrete":
        return n * (1 - 1 / math.factorial(m))
    if name == "emd-positionwise":
        return (m * m - 1) / 3
    if name == "l1-positionwise":
        return 2.0 * (m - 1)
    if name == "pairwise":
        return n * m * (m - 1) / 2
    return n * m * (m * m - 1) / 12


def normalize_distances(matrix: DistanceMatrix, metric: str, m: int, n: int) -> DistanceMatrix:
    """Divide every entry by the identity-uniformity distance of the metric."""
    return DistanceMatrix(matrix.labels, matrix.values / id_un_distance(metric, m, n))
