"""Compass matrices and their closed-form mutual distances.

The four compass points are identity (ID, every voter ranks the candidates
the same way), uniformity (UN, every candidate equally likely on every
position), antagonism (AN, half of the voters reverse the other half) and
stratification (ST, the candidates split into two halves, each half uniform
among its own positions).  Their frequency matrices have rows indexed by
positions and columns by candidates.
"""

from __future__ import annotations

import math
from enum import Enum

import numpy as np

from .errors import DomainError, NotAvailableError, ParameterError, UnsupportedParametersError


class CompassKind(str, Enum):
    ID = "ID"
    UN = "UN"
    AN = "AN"
    ST = "ST"
    RID = "rID"

    @classmethod
    def parse(cls, value: "CompassKind | str") -> "CompassKind":
        if isinstance(value, cls):
            return value
        lookup = {kind.value.lower(): kind for kind in cls}
        try:
            return lookup[str(value).lower()]
        except KeyError:
            raise DomainError(f"unknown compass kind {value!r}") from None


class CompassMetric(str, Enum):
    EMD_POS = "emd_pos"
    L1_POS = "l1_pos"
    PAIR = "pair"
    BORDA = "borda"
    SWAP = "swap"
    DISC = "disc"

    @classmethod
    def parse(cls, value: "CompassMetric | str") -> "CompassMetric":
        if isinstance(value, cls):
            return value
        key = str(value).lower().replace("-", "_")
        aliases = {
            "emd_positionwise": cls.EMD_POS,
            "positionwise": cls.EMD_POS,
            "l1_positionwise": cls.L1_POS,
            "pairwise": cls.PAIR,
            "l1_pairwise": cls.PAIR,
            "bordawise": cls.BORDA,
            "emd_bordawise": cls.BORDA,
            "discrete": cls.DISC,
        }
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            raise DomainError(f"unknown compass metric {value!r}") from None


def compass_matrix(kind: CompassKind | str, m: int) -> np.ndarray:
    """Frequency matrix of a compass point over ``m`` candidates.

    Raises:
        ParameterError: ``m < 1``, or ST with odd ``m``.
    """
    kind = CompassKind.parse(kind)
    if m < 1:
        raise ParameterError("need at least one candidate")
    identity = np.eye(m)
    reverse = identity[::-1].copy()
    if kind is CompassKind.ID:
        return identity
    if kind is CompassKind.RID:
        return reverse
    if kind is CompassKind.UN:
        return np.full((m, m), 1.0 / m)
    if kind is CompassKind.AN:
        return (identity + reverse) / 2
    if m % 2:
        raise ParameterError(f"stratification needs an even number of candidates, got {m}")
    half = m // 2
    block = np.full((half, half), 1.0 / half)
    result = np.zeros((m, m))
    result[:half, :half] = block
    result[half:, half:] = block
    return result


def compass_pairwise_matrix(kind: CompassKind | str, m: int) -> np.ndarray:
    """Fraction of voters preferring candidate ``c`` to ``d`` (diagonal zero)."""
    kind = CompassKind.parse(kind)
    c, d = np.indices((m, m))
    if kind is CompassKind.ID:
        result = (c < d).astype(float)
    elif kind is CompassKind.RID:
        result = (c > d).astype(float)
    elif kind in (CompassKind.UN, CompassKind.AN):
        result = np.full((m, m), 0.5)
    else:
        compass_matrix(kind, m)  # parity check
        half = m // 2
        same_half = (c < half) == (d < half)
        result = np.where(same_half, 0.5, (c < half).astype(float))
    np.fill_diagonal(result, 0.0)
    return result


def compass_borda_vector(kind: CompassKind | str, m: int) -> np.ndarray:
    """Per-voter Borda scores implied by the compass frequency matrix."""
    freq = compass_matrix(kind, m)
    points = (m - 1 - np.arange(m)).astype(float)
    return points @ freq


def convex_path(x: np.ndarray, y: np.ndarray, alpha: float) -> np.ndarray:
    """The matrix ``alpha * x + (1 - alpha) * y``.

    When ``x`` and ``y`` are aligned (the identity column matching is optimal
    between them) the result splits their positionwise distance in the
    ratio ``(1 - alpha) : alpha``.

    Raises:
        DomainError: ``alpha`` outside ``[0, 1]`` or mismatched shapes.
    """
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"alpha must lie in [0, 1], got {alpha}")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise DomainError(f"matrices of shapes {x.shape} and {y.shape}")
    return alpha * x + (1.0 - alpha) * y


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------


def _emd_pos(a, b, m):
    table = {
        ("ID", "UN"): (m * m - 1) / 3,
        ("ID", "AN"): m * m / 4,
        ("UN", "ST"): m * m / 4,
        ("ID", "ST"): 2 / 3 * (m * m / 4 - 1),
        ("UN", "AN"): 2 / 3 * (m * m / 4 - 1),
        ("AN", "ST"): 13 / 48 * m * m - 1 / 3,
    }
    return table[(a, b)]


def _l1_pos(a, b, m):
    table = {
        ("ID", "UN"): 2 * (m - 1),
        ("UN", "AN"): 2 * (m - 2),
        ("AN", "ST"): 2 * (m - 2),
        ("ID", "ST"): 2 * (m - 2),
        ("UN", "ST"): m,
        ("ID", "AN"): m,
    }
    return float(table[(a, b)])


def _pair(a, b, m):
    # uniformity and antagonism share the same weighted majority relation
    a, b = ("UN" if a == "AN" else a), ("UN" if b == "AN" else b)
    if a == b:
        return 0.0
    a, b = sorted((a, b), key=_ORDER.index)
    table = {("ID", "UN"): m * (m - 1) / 2, ("UN", "ST"): m * m / 4, ("ID", "ST"): m * (m - 2) / 4}
    return table[(a, b)]


def _borda(a, b, m):
    # Per voter, a stratification candidate from the upper half scores
    # (3m - 2) / 4 on average and one from the lower half (m - 2) / 4; the
    # two entries involving ST follow from these averages.
    a, b = ("UN" if a == "AN" else a), ("UN" if b == "AN" else b)
    if a == b:
        return 0.0
    a, b = sorted((a, b), key=_ORDER.index)
    table = {
        ("ID", "UN"): m * (m * m - 1) / 12,
        ("UN", "ST"): m**3 / 16,
        ("ID", "ST"): m * (m * m - 4) / 48,
    }
    return table[(a, b)]


def _swap(a, b, m, n):
    if (a, b) in (("UN", "AN"), ("AN", "ST")):
        lower = n * (m * m - 3 * m + 2) / 8 if a == "UN" else n * (m * m - 2 * m) / 8
        raise NotAvailableError(
            f"no closed form is known for the swap distance between {a} and {b}",
            bounds=(lower, n * (m * m - m) / 4),
        )
    table = {
        ("ID", "UN"): n * (m * m - m) / 4,
        ("ID", "AN"): n * (m * m - m) / 4,
        ("ID", "ST"): n * (m * m - 2 * m) / 8,
        ("UN", "ST"): n * m * m / 8,
    }
    return table[(a, b)]


def _disc(a, b, m, n):
    full = math.factorial(m)
    halves = math.factorial(m // 2) ** 2
    table = {
        ("ID", "UN"): n * (full - 1) / full,
        ("ID", "AN"): n / 2,
        ("UN", "AN"): n * (full - 2) / full,
        ("UN", "ST"): n * (full - halves) / full,
        ("ID", "ST"): n * (halves - 1) / halves,
        ("AN", "ST"): n * (halves - 1) / halves,
    }
    return table[(a, b)]


_ORDER = ["ID", "UN", "AN", "ST"]


def election_divisor(kind: CompassKind | str, m: int) -> int:
    """Smallest number of voters that divides every exact realization of a compass election."""
    kind = CompassKind.parse(kind)
    if kind in (CompassKind.ID, CompassKind.RID):
        return 1
    if kind is CompassKind.AN:
        return 2
    if kind is CompassKind.UN:
        return math.factorial(m)
    return math.factorial(m // 2) ** 2


def compass_distance(
    metric: CompassMetric | str,
    a: CompassKind | str,
    b: CompassKind | str,
    m: int,
    n: int | None = None,
    normalized: bool = True,
) -> float:
    """Closed-form distance between two compass points.

    Args:
        metric: ``emd_pos``, ``l1_pos``, ``pair``, ``borda``, ``swap`` or ``disc``.
        m: number of candidates.
        n: number of voters; required for ``swap`` and ``disc`` and for the
            count form of the aggregate metrics.
        normalized: for the aggregate metrics, return the per-voter value
            (frequency matrices, fractions, per-voter Borda scores).  With
            ``False`` the value is scaled by ``n``.  Ignored for ``swap`` and
            ``disc``, which are always totals over voters.

    Raises:
        UnsupportedParametersError: the divisibility conditions of the closed
            form do not hold (``4 | m`` for the positionwise metrics, even
            ``m`` for ``borda`` and whenever ST is involved, and exact
            realizability of the compass elections by ``n`` voters for
            ``swap``/``disc``).
        NotAvailableError: swap between UN and AN or between AN and ST; the
            exception carries the known lower and upper bounds.
    """
    metric = CompassMetric.parse(metric)
    a, b = CompassKind.parse(a), CompassKind.parse(b)
    if CompassKind.RID in (a, b):
        raise UnsupportedParametersError("closed forms are stated for ID, UN, AN and ST only")
    if m < 2:
        raise UnsupportedParametersError("closed forms need at least two candidates")
    if a is b:
        return 0.0
    first, second = sorted((a.value, b.value), key=_ORDER.index)
    if CompassKind.ST in (a, b) and m % 2:
        raise UnsupportedParametersError(f"stratification needs an even number of candidates, got {m}")
    if metric in (CompassMetric.EMD_POS, CompassMetric.L1_POS) and m % 4:
        raise UnsupportedParametersError(f"positionwise closed forms need m divisible by 4, got {m}")
    if metric is CompassMetric.BORDA and m % 2:
        raise UnsupportedParametersError(f"Bordawise closed forms need an even m, got {m}")

    if metric in (CompassMetric.SWAP, CompassMetric.DISC):
        if n is None:
            raise UnsupportedParametersError(f"{metric.value} needs the number of voters")
        for kind in (a, b):
            divisor = election_divisor(kind, m)
            if n % divisor:
                raise UnsupportedParametersError(
                    f"{kind.value} with {m} candidates is realized exactly only when {divisor} divides n={n}"
                )
        if metric is CompassMetric.SWAP:
            return _swap(first, second, m, n)
        return _disc(first, second, m, n)

    formula = {
        CompassMetric.EMD_POS: _emd_pos,
        CompassMetric.L1_POS: _l1_pos,
        CompassMetric.PAIR: _pair,
        CompassMetric.BORDA: _borda,
    }[metric]
    value = formula(first, second, m)
    if normalized:
        return value
    if n is None:
        raise UnsupportedParametersError("the count form needs the number of voters")
    return value * n
