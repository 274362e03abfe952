"""Samplers for ordinal statistical cultures.

Every sampler takes the number of candidates ``m``, the number of voters
``n`` and a random source, and returns an :class:`OrdinalElection`.  Random
sources may be a :class:`numpy.random.Generator` or an integer seed.

Culture specifications can be written as strings such as ``"ic"``,
``"urn:alpha=0.2"`` or ``"norm-mallows:phi=0.5,w=0.25"``.  A numeric
parameter may also be a distribution, ``gamma(0.8,1)`` or ``uniform(0,1)``,
which is drawn once per election by :meth:`CultureSpec.resolve`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.optimize import brentq

from .core import OrdinalElection
from .errors import DomainError, ParameterError

RngLike = np.random.Generator | int | None

#: Radius of the disc, circle and sphere spaces (centered at the origin).
DEFAULT_RADIUS = 0.5


def as_generator(rng: RngLike) -> np.random.Generator:
    """Turn a seed (or ``None``) into a generator; generators pass through."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def dataset_seed(base: int, index: int) -> int:
    """Per-election seed of a dataset: the base seed XOR the election index."""
    return int(base) ^ int(index)


# ---------------------------------------------------------------------------
# Specifications
# ---------------------------------------------------------------------------

_DISTRIBUTION = re.compile(r"^(gamma|uniform)\(\s*([^,]+)\s*,\s*([^)]+)\s*\)$")

_ALIASES = {
    "impartial": "ic",
    "impartial-culture": "ic",
    "polya": "urn",
    "normalized-mallows": "norm-mallows",
    "norm_mallows": "norm-mallows",
    "single-peaked-walsh": "walsh",
    "single-peaked-conitzer": "conitzer",
    "single_crossing": "single-crossing",
    "group-separable-balanced": "gs-balanced",
    "group-separable-caterpillar": "gs-caterpillar",
    "hypercube": "ncube",
    "n-cube": "ncube",
    "n-sphere": "nsphere",
}


@dataclass(frozen=True)
class CultureSpec:
    """A culture name plus its parameters.

    Attributes:
        kind: culture name, e.g. ``"ic"``, ``"urn"``, ``"norm-mallows"``.
        params: parameter values; strings are distributions still to be drawn.
    """

    kind: str
    params: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        kind = _ALIASES.get(self.kind.lower(), self.kind.lower())
        if kind not in SAMPLERS:
            raise DomainError(f"unknown culture {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "params", dict(self.params))

    @classmethod
    def parse(cls, text: str) -> "CultureSpec":
        """Parse ``"name"`` or ``"name:key=value,key=value"``."""
        text = text.strip()
        if not text:
            raise DomainError("empty culture specification")
        name, _, rest = text.partition(":")
        params: dict[str, object] = {}
        # split on commas that are not inside parentheses
        for item in re.split(r",(?![^()]*\))", rest):
            item = item.strip()
            if not item:
                continue
            key, sep, value = item.partition("=")
            if not sep:
                raise DomainError(f"parameter {item!r} is not of the form key=value")
            params[key.strip().lower()] = _parse_value(value.strip())
        return cls(name.strip(), params)

    def resolve(self, rng: RngLike = None) -> "CultureSpec":
        """Draw every distribution-valued parameter; returns a concrete spec."""
        gen = as_generator(rng)
        values = {}
        for key in sorted(self.params):
            value = self.params[key]
            values[key] = _draw(value, gen) if isinstance(value, str) else value
        return CultureSpec(self.kind, values)

    def __str__(self) -> str:
        if not self.params:
            return self.kind
        inner = ",".join(f"{k}={_format_value(v)}" for k, v in sorted(self.params.items()))
        return f"{self.kind}:{inner}"


def _parse_value(value: str) -> object:
    match = _DISTRIBUTION.match(value.replace(" ", ""))
    if match:
        float(match.group(2)), float(match.group(3))  # validate now
        return value.replace(" ", "")
    try:
        number = float(value)
    except ValueError:
        return value.lower()
    return int(number) if number.is_integer() and "." not in value and "e" not in value.lower() else number


def _format_value(value: object) -> str:
    if isinstance(value, float):
        return format(value, ".9g")
    return str(value)


def _draw(value: str, gen: np.random.Generator) -> object:
    match = _DISTRIBUTION.match(value)
    if not match:
        return value
    a, b = float(match.group(2)), float(match.group(3))
    if match.group(1) == "gamma":
        return float(gen.gamma(shape=a, scale=b))
    return float(gen.uniform(a, b))


def _param(spec: CultureSpec, *names: str, default=None):
    for name in names:
        if name in spec.params:
            value = spec.params[name]
            if isinstance(value, str) and _DISTRIBUTION.match(value):
                raise ParameterError(f"parameter {name}={value} must be resolved before sampling")
            return value
    if default is None:
        raise ParameterError(f"culture {spec.kind!r} needs parameter {names[0]!r}")
    return default


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------


def _check_sizes(m: int, n: int) -> None:
    if m < 1 or n < 1:
        raise ParameterError(f"need m >= 1 and n >= 1, got m={m}, n={n}")


def _random_order(m: int, gen: np.random.Generator) -> np.ndarray:
    return gen.permutation(m).astype(np.int64)


def _central(spec: CultureSpec, m: int, gen: np.random.Generator) -> np.ndarray:
    central = spec.params.get("central")
    if central is None:
        return _random_order(m, gen)
    if isinstance(central, str):
        central = [int(c) for c in central.replace(">", " ").split()]
    central = np.asarray(central, dtype=np.int64)
    if sorted(central.tolist()) != list(range(m)):
        raise ParameterError("central vote must be a permutation of the candidates")
    return central


# ---------------------------------------------------------------------------
# Impartial culture, urn, Mallows
# ---------------------------------------------------------------------------


def sample_ic(m: int, n: int, gen: np.random.Generator) -> OrdinalElection:
    votes = np.array([gen.permutation(m) for _ in range(n)], dtype=np.int64)
    return OrdinalElection(m, votes)


def sample_urn(m: int, n: int, alpha: float, gen: np.random.Generator) -> OrdinalElection:
    """Pólya-Eggenberger urn with contagion ``alpha``.

    The urn starts with one copy of each of the ``m!`` orders and every drawn
    order is returned with ``alpha * m!`` extra copies.  After ``i`` draws a
    fresh uniform order is drawn with probability ``1 / (1 + i * alpha)``;
    otherwise one of the earlier votes is copied uniformly.  This never
    materializes the ``m!`` orders.
    """
    if alpha < 0:
        raise ParameterError(f"urn contagion must be nonnegative, got {alpha}")
    votes = np.empty((n, m), dtype=np.int64)
    for i in range(n):
        if gen.random() * (1.0 + i * alpha) < 1.0:
            votes[i] = gen.permutation(m)
        else:
            votes[i] = votes[gen.integers(i)]
    return OrdinalElection(m, votes)


def urn_expected_distinct_bound(alpha: float, n: int) -> float:
    """Upper bound on the expected number of distinct votes in an urn election."""
    if alpha < 0:
        raise ParameterError(f"urn contagion must be nonnegative, got {alpha}")
    return float(sum(1.0 / (1.0 + i * alpha) for i in range(n)))


def mallows_insertion_sample(phi: float, central: Sequence[int], rng: RngLike = None) -> tuple[int, ...]:
    """One Mallows vote by repeated insertion.

    The ``i``-th candidate of the central vote is inserted among the ``i + 1``
    slots of the partial ranking; landing ``k`` slots above the bottom
    creates ``k`` inversions and has weight ``phi ** k``.
    """
    if not 0.0 <= phi <= 1.0:
        raise ParameterError(f"phi must lie in [0, 1], got {phi}")
    gen = as_generator(rng)
    ranking: list[int] = []
    for i, candidate in enumerate(central):
        if phi == 0.0:
            ranking.append(int(candidate))
            continue
        weights = phi ** np.arange(i, -1, -1, dtype=float)  # slot j creates i - j inversions
        slot = int(gen.choice(i + 1, p=weights / weights.sum()))
        ranking.insert(slot, int(candidate))
    return tuple(ranking)


def mallows_expected_swap(phi: float, m: int) -> float:
    """Expected swap distance between the central vote and a Mallows sample."""
    if phi <= 0.0:
        return 0.0
    if phi >= 1.0:
        return m * (m - 1) / 4
    total = 0.0
    for i in range(1, m):
        # inversions created by inserting the (i+1)-th candidate: 0..i with weights phi^k
        total += phi / (1 - phi) - (i + 1) * phi ** (i + 1) / (1 - phi ** (i + 1))
    return total


def normalize_phi(norm_phi: float, m: int) -> float:
    """Dispersion ``phi`` whose expected swap distance is ``norm_phi / 2`` of the maximum.

    The maximum swap distance between two votes is ``m (m - 1) / 2``.
    """
    if not 0.0 <= norm_phi <= 1.0:
        raise ParameterError(f"norm-phi must lie in [0, 1], got {norm_phi}")
    if m < 2 or norm_phi == 0.0:
        return 0.0
    if norm_phi == 1.0:
        return 1.0
    target = norm_phi / 2 * m * (m - 1) / 2
    return float(brentq(lambda phi: mallows_expected_swap(phi, m) - target, 0.0, 1.0, xtol=1e-15, rtol=1e-15))


def _insertion_slots(phi: float, m: int, n: int, gen: np.random.Generator) -> np.ndarray:
    """Insertion slots of all ``n`` votes at once, drawn by inverse CDF."""
    slots = np.zeros((n, m), dtype=np.int64)
    if phi == 0.0:
        slots[:] = np.arange(m)
        return slots
    for i in range(1, m):
        weights = phi ** np.arange(i, -1, -1, dtype=float)
        cdf = np.cumsum(weights) / weights.sum()
        slots[:, i] = np.minimum(np.searchsorted(cdf, gen.random(n), side="right"), i)
    return slots


def sample_mallows(m: int, n: int, phi: float, central: np.ndarray, gen: np.random.Generator) -> OrdinalElection:
    """``n`` independent Mallows votes around ``central`` (same insertion scheme, vectorized draws)."""
    if not 0.0 <= phi <= 1.0:
        raise ParameterError(f"phi must lie in [0, 1], got {phi}")
    central = [int(c) for c in central]
    slots = _insertion_slots(phi, m, n, gen)
    votes = np.empty((n, m), dtype=np.int64)
    for row in range(n):
        ranking: list[int] = []
        for i, slot in enumerate(slots[row]):
            ranking.insert(int(slot), central[i])
        votes[row] = ranking
    return OrdinalElection(m, votes)


def sample_norm_mallows(
    m: int, n: int, norm_phi: float, weight: float, central: np.ndarray, gen: np.random.Generator
) -> OrdinalElection:
    """Normalized Mallows; the first ``floor(weight * n)`` votes are then reversed."""
    if not 0.0 <= weight <= 0.5:
        raise ParameterError(f"reversed fraction must lie in [0, 0.5], got {weight}")
    phi = normalize_phi(norm_phi, m)
    votes = sample_mallows(m, n, phi, central, gen).votes.copy()
    flipped = int(math.floor(weight * n))
    votes[:flipped] = votes[:flipped, ::-1]
    return OrdinalElection(m, votes)


# ---------------------------------------------------------------------------
# Single-peaked and single-crossing
# ---------------------------------------------------------------------------


def walsh_vote(axis: Sequence[int], gen: np.random.Generator) -> list[int]:
    """Uniformly random vote single-peaked on ``axis``.

    The vote is built from the bottom: the least preferred remaining
    candidate is one of the two ends of the remaining axis interval, chosen
    with probability one half, so each of the ``2 ** (m - 1)`` votes is
    equally likely.
    """
    left, right = 0, len(axis) - 1
    bottom_up = []
    while left < right:
        if gen.random() < 0.5:
            bottom_up.append(axis[left])
            left += 1
        else:
            bottom_up.append(axis[right])
            right -= 1
    bottom_up.append(axis[left])
    return [int(c) for c in reversed(bottom_up)]


def conitzer_vote(axis: Sequence[int], gen: np.random.Generator) -> list[int]:
    """Random-peak vote: uniform top, then grow the interval left or right with probability one half."""
    m = len(axis)
    peak = int(gen.integers(m))
    left = right = peak
    vote = [int(axis[peak])]
    while len(vote) < m:
        if left == 0:
            right += 1
            vote.append(int(axis[right]))
        elif right == m - 1:
            left -= 1
            vote.append(int(axis[left]))
        elif gen.random() < 0.5:
            left -= 1
            vote.append(int(axis[left]))
        else:
            right += 1
            vote.append(int(axis[right]))
    return vote


def spoc_vote(axis: Sequence[int], gen: np.random.Generator) -> list[int]:
    """Random-peak vote on the cyclic axis."""
    m = len(axis)
    peak = int(gen.integers(m))
    vote = [int(axis[peak])]
    left = right = 0  # offsets from the peak
    while len(vote) < m:
        if gen.random() < 0.5:
            left += 1
            vote.append(int(axis[(peak - left) % m]))
        else:
            right += 1
            vote.append(int(axis[(peak + right) % m]))
    return vote


def single_crossing_domain(m: int, rng: RngLike = None) -> list[tuple[int, ...]]:
    """A random single-crossing domain of ``m (m - 1) / 2 + 1`` orders, in construction order.

    Starting from the identity, a uniformly drawn candidate that sits directly
    below a candidate with a smaller index swaps with it; every swap creates
    one new inversion and is recorded as the next order.  Finally the
    candidate names are permuted uniformly.
    """
    gen = as_generator(rng)
    vote = list(range(m))
    domain = [tuple(vote)]
    target = list(range(m - 1, -1, -1))
    position = list(range(m))
    while vote != target:
        j = int(gen.integers(m))
        p = position[j]
        if p == 0:
            continue
        i = vote[p - 1]
        if i < j:
            vote[p - 1], vote[p] = j, i
            position[j], position[i] = p - 1, p
            domain.append(tuple(vote))
    names = gen.permutation(m)
    return [tuple(int(names[c]) for c in order) for order in domain]


# ---------------------------------------------------------------------------
# Group-separable
# ---------------------------------------------------------------------------


@dataclass
class TreeNode:
    """Node of an ordered tree; leaves carry a leaf slot index."""

    children: list["TreeNode"] = field(default_factory=list)
    leaf: int | None = None


def balanced_tree(num_leaves: int) -> TreeNode:
    """Complete full binary tree with ``num_leaves`` leaves (levels filled left to right)."""
    if num_leaves < 1:
        raise ParameterError("a tree needs at least one leaf")
    total = 2 * num_leaves - 1
    counter = iter(range(num_leaves))

    def build(index: int) -> TreeNode:
        if 2 * index + 1 < total:
            return TreeNode([build(2 * index + 1), build(2 * index + 2)])
        return TreeNode()

    root = build(0)
    _number_leaves(root, counter)
    return root


def caterpillar_tree(num_leaves: int) -> TreeNode:
    """Binary tree whose inner nodes all have a leaf as their left child."""
    if num_leaves < 1:
        raise ParameterError("a tree needs at least one leaf")
    node = TreeNode(leaf=num_leaves - 1)
    for slot in range(num_leaves - 2, -1, -1):
        node = TreeNode([TreeNode(leaf=slot), node])
    return node


def _number_leaves(node: TreeNode, counter) -> None:
    if not node.children:
        node.leaf = next(counter)
        return
    for child in node.children:
        _number_leaves(child, counter)


def tree_frontier(node: TreeNode, reversed_nodes: Callable[[], bool] | None = None) -> list[int]:
    """Leaf slots from left to right; ``reversed_nodes()`` decides per inner node whether to flip it."""
    if not node.children:
        return [node.leaf]
    children = node.children[::-1] if reversed_nodes is not None and reversed_nodes() else node.children
    result = []
    for child in children:
        result.extend(tree_frontier(child, reversed_nodes))
    return result


def sample_group_separable(m: int, n: int, tree: TreeNode, gen: np.random.Generator) -> OrdinalElection:
    """Votes consistent with ``tree``; leaves are assigned candidates by a uniform permutation."""
    labels = gen.permutation(m)
    flip = lambda: bool(gen.random() < 0.5)  # noqa: E731
    votes = np.array([[labels[slot] for slot in tree_frontier(tree, flip)] for _ in range(n)], dtype=np.int64)
    return OrdinalElection(m, votes)


# ---------------------------------------------------------------------------
# Euclidean
# ---------------------------------------------------------------------------


def _ball_surface(count: int, dim: int, radius: float, gen: np.random.Generator) -> np.ndarray:
    points = gen.normal(size=(count, dim))
    points /= np.linalg.norm(points, axis=1, keepdims=True)
    return radius * points


def sample_points(space: str, count: int, gen: np.random.Generator, dim: int | None = None, radius: float = DEFAULT_RADIUS) -> np.ndarray:
    """Uniform points from a named space; returns an array of shape ``(count, t)``."""
    if space == "interval":
        return gen.uniform(0.0, 1.0, size=(count, 1))
    if space == "square":
        return gen.uniform(0.0, 1.0, size=(count, 2))
    if space == "cube":
        return gen.uniform(0.0, 1.0, size=(count, 3))
    if space == "ncube":
        if dim is None or dim < 1:
            raise ParameterError("ncube needs a dimension dim >= 1")
        return gen.uniform(0.0, 1.0, size=(count, dim))
    if space == "disc":
        angle = gen.uniform(0.0, 2 * math.pi, size=count)
        r = radius * np.sqrt(gen.uniform(0.0, 1.0, size=count))
        return np.column_stack([r * np.cos(angle), r * np.sin(angle)])
    if space == "circle":
        return _ball_surface(count, 2, radius, gen)
    if space == "sphere":
        return _ball_surface(count, 3, radius, gen)
    if space == "nsphere":
        if dim is None or dim < 1:
            raise ParameterError("nsphere needs a dimension dim >= 1")
        return _ball_surface(count, dim + 1, radius, gen)
    raise DomainError(f"unknown Euclidean space {space!r}")


def euclidean_votes(voters: np.ndarray, candidates: np.ndarray) -> np.ndarray:
    """Rank candidates by distance from each voter; ties go to the smaller index."""
    distances = np.linalg.norm(voters[:, None, :] - candidates[None, :, :], axis=2)
    return np.argsort(distances, axis=1, kind="stable").astype(np.int64)


def sample_euclidean(m: int, n: int, space: str, gen: np.random.Generator, dim: int | None = None, radius: float = DEFAULT_RADIUS) -> OrdinalElection:
    candidates = sample_points(space, m, gen, dim, radius)
    voters = sample_points(space, n, gen, dim, radius)
    return OrdinalElection(m, euclidean_votes(voters, candidates))


# ---------------------------------------------------------------------------
# Compass elections
# ---------------------------------------------------------------------------


def compass_election(kind: str, m: int, n: int, rng: RngLike = None, exact: bool = False) -> OrdinalElection:
    """ID, AN, UN or ST election.

    With ``exact=False`` (the sampling convention) UN is an impartial-culture
    election and ST samples the order inside each half independently.  With
    ``exact=True`` UN contains every order ``n / m!`` times and ST every
    half-respecting order ``n / ((m/2)!)^2`` times, in lexicographic order
    over the identity naming.

    Raises:
        ParameterError: AN with odd ``n``; ST with odd ``m``; exact UN/ST when
            the divisibility condition fails.
    """
    from itertools import permutations

    gen = as_generator(rng)
    _check_sizes(m, n)
    kind = kind.upper()
    if kind == "ID":
        vote = _random_order(m, gen) if not exact else np.arange(m)
        return OrdinalElection(m, np.tile(vote, (n, 1)))
    if kind == "AN":
        if n % 2:
            raise ParameterError(f"antagonism needs an even number of voters, got {n}")
        vote = _random_order(m, gen) if not exact else np.arange(m)
        return OrdinalElection(m, np.vstack([np.tile(vote, (n // 2, 1)), np.tile(vote[::-1], (n // 2, 1))]))
    if kind == "UN":
        if not exact:
            return sample_ic(m, n, gen)
        count = math.factorial(m)
        if n % count:
            raise ParameterError(f"exact uniformity needs n divisible by {count}")
        orders = np.array(list(permutations(range(m))), dtype=np.int64)
        return OrdinalElection(m, np.tile(orders, (n // count, 1)))
    if kind == "ST":
        if m % 2:
            raise ParameterError(f"stratification needs an even number of candidates, got {m}")
        half = m // 2
        if not exact:
            names = _random_order(m, gen)
            top, bottom = names[:half], names[half:]
            votes = np.array([np.concatenate([gen.permutation(top), gen.permutation(bottom)]) for _ in range(n)])
            return OrdinalElection(m, votes)
        count = math.factorial(half) ** 2
        if n % count:
            raise ParameterError(f"exact stratification needs n divisible by {count}")
        orders = np.array(
            [list(a) + list(b) for a in permutations(range(half)) for b in permutations(range(half, m))],
            dtype=np.int64,
        )
        return OrdinalElection(m, np.tile(orders, (n // count, 1)))
    raise DomainError(f"unknown compass election {kind!r}")


# ---------------------------------------------------------------------------
# Dispatcher
# ---------------------------------------------------------------------------


def _sample_urn(spec, m, n, gen):
    return sample_urn(m, n, float(_param(spec, "alpha")), gen)


def _sample_mallows(spec, m, n, gen):
    phi = float(_param(spec, "phi"))
    if not 0.0 <= phi <= 1.0:
        raise ParameterError(f"phi must lie in [0, 1], got {phi}")
    return sample_mallows(m, n, phi, _central(spec, m, gen), gen)


def _sample_norm_mallows(spec, m, n, gen):
    norm_phi = float(_param(spec, "phi", "norm_phi", "norm-phi"))
    weight = float(_param(spec, "w", "omega", "weight", default=0.0))
    return sample_norm_mallows(m, n, norm_phi, weight, _central(spec, m, gen), gen)


def _axis_sampler(vote_fn):
    def sample(spec, m, n, gen):
        axis = _random_order(m, gen)
        votes = np.array([vote_fn(axis, gen) for _ in range(n)], dtype=np.int64)
        return OrdinalElection(m, votes)

    return sample


def _sample_single_crossing(spec, m, n, gen):
    domain = single_crossing_domain(m, gen)
    picks = gen.integers(len(domain), size=n)
    return OrdinalElection(m, np.array([domain[i] for i in picks], dtype=np.int64))


def _sample_gs(tree_kind):
    def sample(spec, m, n, gen):
        tree = balanced_tree(m) if tree_kind == "balanced" else caterpillar_tree(m)
        return sample_group_separable(m, n, tree, gen)

    return sample


def _sample_group_separable(spec, m, n, gen):
    tree = str(_param(spec, "tree", default="balanced"))
    if tree not in ("balanced", "caterpillar"):
        raise ParameterError(f"tree must be balanced or caterpillar, got {tree!r}")
    return _sample_gs(tree)(spec, m, n, gen)


def _euclidean(space):
    def sample(spec, m, n, gen):
        dim = spec.params.get("dim")
        radius = float(spec.params.get("radius", DEFAULT_RADIUS))
        if radius <= 0:
            raise ParameterError("radius must be positive")
        return sample_euclidean(m, n, space, gen, None if dim is None else int(dim), radius)

    return sample


def _compass(kind):
    def sample(spec, m, n, gen):
        return compass_election(kind, m, n, gen, exact=bool(spec.params.get("exact", 0)))

    return sample


SAMPLERS: dict[str, Callable[[CultureSpec, int, int, np.random.Generator], OrdinalElection]] = {
    "ic": lambda spec, m, n, gen: sample_ic(m, n, gen),
    "urn": _sample_urn,
    "mallows": _sample_mallows,
    "norm-mallows": _sample_norm_mallows,
    "walsh": _axis_sampler(walsh_vote),
    "conitzer": _axis_sampler(conitzer_vote),
    "spoc": _axis_sampler(spoc_vote),
    "single-crossing": _sample_single_crossing,
    "group-separable": _sample_group_separable,
    "gs-balanced": _sample_gs("balanced"),
    "gs-caterpillar": _sample_gs("caterpillar"),
    "interval": _euclidean("interval"),
    "disc": _euclidean("disc"),
    "square": _euclidean("square"),
    "cube": _euclidean("cube"),
    "ncube": _euclidean("ncube"),
    "circle": _euclidean("circle"),
    "sphere": _euclidean("sphere"),
    "nsphere": _euclidean("nsphere"),
    "id": _compass("ID"),
    "an": _compass("AN"),
    "un": _compass("UN"),
    "st": _compass("ST"),
}


def sample_election(spec: CultureSpec | str, m: int, n: int, rng: RngLike = None) -> OrdinalElection:
    """Sample an election from a culture.

    Distribution-valued parameters are drawn first, from the same random
    source, so a single seed determines the whole election.

    Raises:
        ParameterError: invalid sizes or parameters.
        DomainError: unknown culture.
    """
    if isinstance(spec, str):
        spec = CultureSpec.parse(spec)
    _check_sizes(m, n)
    gen = as_generator(rng)
    spec = spec.resolve(gen)
    return SAMPLERS[spec.kind](spec, m, n, gen)
