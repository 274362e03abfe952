"""Distances between votes and between ordinal elections."""

from .isomorphic import IsoResult, MatchingConstraint, iso_distance, iso_distance_witness
from .kemeny import kemeny_ranking
from .nonisomorphic import (
    ColumnNorm,
    MatrixForm,
    bordawise_distance,
    pairwise_distance,
    positionwise_distance,
)
from .votes import VoteMetric, vote_distance

__all__ = [
    "ColumnNorm",
    "IsoResult",
    "MatchingConstraint",
    "MatrixForm",
    "VoteMetric",
    "bordawise_distance",
    "iso_distance",
    "iso_distance_witness",
    "kemeny_ranking",
    "pairwise_distance",
    "positionwise_distance",
    "vote_distance",
]
