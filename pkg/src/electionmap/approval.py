"""Approval elections: cultures, distances, the resampling grid and committee statistics."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy.special import gammaln, logsumexp

from .core import ApprovalElection, l1
from .cultures import _DISTRIBUTION, RngLike, _draw, _parse_value, as_generator, sample_urn
from .errors import BudgetExceededError, DomainError, ParameterError, SizeMismatchError
from .matching import assignment_value, min_cost_assignment

#: Default cap on the number of candidates for the isomorphic Hamming distance.
HAMMING_MAX_CANDIDATES = 8
#: Default cap on enumerated committees or candidate subsets.
SUBSET_BUDGET = 5_000_000

APPROVAL_CULTURES = (
    "ic",
    "id",
    "resampling",
    "moving",
    "disjoint",
    "noise",
    "euclidean-1d",
    "euclidean-2d",
    "truncated-urn",
    "empty",
    "full",
)

_ALIASES = {
    "p-ic": "ic",
    "p-id": "id",
    "interval": "euclidean-1d",
    "square": "euclidean-2d",
    "urn": "truncated-urn",
}


@dataclass(frozen=True)
class ApprovalCultureSpec:
    """An approval culture name plus parameters, e.g. ``resampling:p=0.5,phi=0.2``.

    Parameters: ``p`` (approval fraction), ``phi`` (noise), ``g`` (groups),
    ``distance`` (``hamming`` or ``jaccard`` for the noise model), ``radius``
    (Euclidean models) and ``alpha`` (contagion of the truncated urn).
    Values may be ``uniform(a,b)`` or ``gamma(a,b)`` distributions, drawn by
    :meth:`resolve`.
    """

    kind: str
    params: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        kind = self.kind.strip().lower()
        kind = _ALIASES.get(kind, kind)
        if kind not in APPROVAL_CULTURES:
            raise DomainError(f"unknown approval culture {self.kind!r}; expected one of {APPROVAL_CULTURES}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "params", dict(self.params))

    @classmethod
    def parse(cls, text: str) -> "ApprovalCultureSpec":
        name, _, rest = text.strip().partition(":")
        params: dict[str, object] = {}
        for item in filter(None, (s.strip() for s in _split_params(rest))):
            key, sep, value = item.partition("=")
            if not sep:
                raise DomainError(f"parameter {item!r} is not of the form key=value")
            params[key.strip().lower()] = _parse_value(value.strip())
        return cls(name, params)

    def resolve(self, rng: RngLike = None) -> "ApprovalCultureSpec":
        gen = as_generator(rng)
        values = {}
        for key in sorted(self.params):
            value = self.params[key]
            values[key] = _draw(value, gen) if isinstance(value, str) else value
        return ApprovalCultureSpec(self.kind, values)

    def get(self, name: str, default=None):
        if name in self.params:
            value = self.params[name]
            if isinstance(value, str) and _DISTRIBUTION.match(value):
                raise ParameterError(f"parameter {name}={value} must be resolved before sampling")
            return value
        if default is None:
            raise ParameterError(f"approval culture {self.kind!r} needs parameter {name!r}")
        return default

    def __str__(self) -> str:
        if not self.params:
            return self.kind
        parts = []
        for key, value in sorted(self.params.items()):
            parts.append(f"{key}={format(value, '.9g') if isinstance(value, float) else value}")
        return f"{self.kind}:{','.join(parts)}"


def _split_params(text: str) -> list[str]:
    parts, depth, current = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return parts


# ---------------------------------------------------------------------------
# Samplers
# ---------------------------------------------------------------------------


def _unit(value: float, name: str) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ParameterError(f"{name} must lie in [0, 1], got {value}")
    return value


def _sizes(m: int, n: int) -> None:
    if m < 1 or n < 1:
        raise ParameterError("approval elections need m >= 1 and n >= 1")


def central_ballot(m: int, p: float, gen: np.random.Generator) -> np.ndarray:
    """Boolean ballot approving ``floor(p m)`` uniformly chosen candidates."""
    ballot = np.zeros(m, dtype=bool)
    ballot[gen.choice(m, size=int(math.floor(p * m)), replace=False)] = True
    return ballot


def resample_votes(central: np.ndarray, p: float, phi: float, count: int, gen: np.random.Generator) -> np.ndarray:
    """Copy ``central`` ``count`` times; each entry is redrawn with probability ``phi``."""
    m = central.size
    redraw = gen.random((count, m)) < phi
    fresh = gen.random((count, m)) < p
    return np.where(redraw, fresh, central[None, :])


def sample_resampling(m: int, n: int, p: float, phi: float, gen: np.random.Generator) -> ApprovalElection:
    _sizes(m, n)
    p, phi = _unit(p, "p"), _unit(phi, "phi")
    central = central_ballot(m, p, gen)
    return ApprovalElection.from_matrix(resample_votes(central, p, phi, n, gen))


def sample_moving(m: int, n: int, p: float, phi: float, gen: np.random.Generator, groups: int = 1) -> ApprovalElection:
    """Resampling where each new vote becomes the next central ballot.

    With ``groups = g``, the central ballot is reset to the original one after
    every ``floor(n / g)`` votes.
    """
    _sizes(m, n)
    p, phi = _unit(p, "p"), _unit(phi, "phi")
    groups = int(groups)
    if not 1 <= groups <= n:
        raise ParameterError(f"number of groups must lie in 1..{n}, got {groups}")
    block = n // groups
    original = central_ballot(m, p, gen)
    current = original
    rows = np.empty((n, m), dtype=bool)
    for i in range(n):
        if i > 0 and i % block == 0:
            current = original
        current = resample_votes(current, p, phi, 1, gen)[0]
        rows[i] = current
    return ApprovalElection.from_matrix(rows)


def sample_disjoint(m: int, n: int, p: float, phi: float, groups: int, gen: np.random.Generator) -> ApprovalElection:
    """Each vote resamples around one of ``g`` disjoint central ballots of size ``floor(p m)``."""
    _sizes(m, n)
    p, phi = _unit(p, "p"), _unit(phi, "phi")
    groups = int(groups)
    size = int(math.floor(p * m))
    if groups < 1:
        raise ParameterError("the disjoint model needs at least one group")
    if size * groups > m:
        raise ParameterError(f"disjoint model is not well-defined: {groups} groups of {size} exceed {m} candidates")
    perm = gen.permutation(m)
    centrals = np.zeros((groups, m), dtype=bool)
    for i in range(groups):
        centrals[i, perm[i * size : (i + 1) * size]] = True
    choice = gen.integers(0, groups, size=n)
    redraw = gen.random((n, m)) < phi
    fresh = gen.random((n, m)) < p
    return ApprovalElection.from_matrix(np.where(redraw, fresh, centrals[choice]))


def _noise_distance(kind: str, x: np.ndarray, y: np.ndarray, z: int) -> np.ndarray:
    """Distance from the central ballot to a vote keeping ``x`` of its ``z`` approvals and adding ``y``."""
    ham = (z - x) + y
    if kind == "hamming":
        return ham.astype(float)
    union = z + y
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(union > 0, ham / np.maximum(union, 1), 0.0)


def noise_log_weights(m: int, z: int, phi: float, distance: str = "hamming") -> np.ndarray:
    """Log-probabilities of ``(x, y)``: keep ``x`` of the ``z`` central approvals, add ``y`` others.

    The weight of ``(x, y)`` is ``C(z, x) C(m - z, y) phi^d`` with ``d`` the
    distance to the central ballot; everything is done in log space.
    """
    if distance not in ("hamming", "jaccard"):
        raise ParameterError(f"noise distance must be 'hamming' or 'jaccard', got {distance!r}")
    x = np.arange(z + 1)[:, None]
    y = np.arange(m - z + 1)[None, :]
    log_binom = (
        gammaln(z + 1) - gammaln(x + 1) - gammaln(z - x + 1)
        + gammaln(m - z + 1) - gammaln(y + 1) - gammaln(m - z - y + 1)
    )
    d = _noise_distance(distance, np.broadcast_to(x, (z + 1, m - z + 1)), np.broadcast_to(y, (z + 1, m - z + 1)), z)
    if phi == 0.0:
        log_phi_term = np.where(d == 0, 0.0, -np.inf)
    else:
        log_phi_term = d * math.log(phi)
    logw = log_binom + log_phi_term
    return logw - logsumexp(logw)


def sample_noise(m: int, n: int, p: float, phi: float, gen: np.random.Generator, distance: str = "hamming") -> ApprovalElection:
    _sizes(m, n)
    p, phi = _unit(p, "p"), _unit(phi, "phi")
    central = central_ballot(m, p, gen)
    z = int(central.sum())
    logp = noise_log_weights(m, z, phi, distance)
    probs = np.exp(logp).ravel()
    probs /= probs.sum()
    picks = gen.choice(probs.size, size=n, p=probs)
    inside = np.flatnonzero(central)
    outside = np.flatnonzero(~central)
    rows = np.zeros((n, m), dtype=bool)
    for i, flat in enumerate(picks):
        x, y = divmod(int(flat), m - z + 1)
        rows[i, gen.choice(inside, size=x, replace=False)] = True
        rows[i, gen.choice(outside, size=y, replace=False)] = True
    return ApprovalElection.from_matrix(rows)


def sample_euclidean_approval(m: int, n: int, dim: int, radius: float, gen: np.random.Generator) -> ApprovalElection:
    """Voters approve the candidates within ``radius``; all points uniform on ``[0,1]^dim``."""
    _sizes(m, n)
    if radius <= 0:
        raise ParameterError("radius must be positive")
    voters = gen.random((n, dim))
    candidates = gen.random((m, dim))
    dist = np.linalg.norm(voters[:, None, :] - candidates[None, :, :], axis=2)
    return ApprovalElection.from_matrix(dist <= radius)


def sample_truncated_urn(m: int, n: int, p: float, alpha: float, gen: np.random.Generator) -> ApprovalElection:
    """Ordinal urn votes truncated to their top ``ceil(p m)`` candidates."""
    _sizes(m, n)
    p = _unit(p, "p")
    top = int(math.ceil(p * m))
    ordinal = sample_urn(m, n, alpha, gen)
    rows = np.zeros((n, m), dtype=bool)
    rows[np.arange(n)[:, None], ordinal.votes[:, :top]] = True
    return ApprovalElection.from_matrix(rows)


def sample_approval(spec: ApprovalCultureSpec | str, m: int, n: int, rng: RngLike = None) -> ApprovalElection:
    """Sample an approval election; distribution-valued parameters are drawn first."""
    gen = as_generator(rng)
    if isinstance(spec, str):
        spec = ApprovalCultureSpec.parse(spec)
    spec = spec.resolve(gen)
    kind = spec.kind
    if kind == "ic":
        return sample_resampling(m, n, spec.get("p"), 1.0, gen)
    if kind == "id":
        return sample_resampling(m, n, spec.get("p"), 0.0, gen)
    if kind == "empty":
        return sample_resampling(m, n, 0.0, 0.0, gen)
    if kind == "full":
        return sample_resampling(m, n, 1.0, 0.0, gen)
    if kind == "resampling":
        return sample_resampling(m, n, spec.get("p"), spec.get("phi"), gen)
    if kind == "moving":
        return sample_moving(m, n, spec.get("p"), spec.get("phi"), gen, groups=spec.get("g", 1))
    if kind == "disjoint":
        return sample_disjoint(m, n, spec.get("p"), spec.get("phi"), spec.get("g"), gen)
    if kind == "noise":
        return sample_noise(m, n, spec.get("p"), spec.get("phi"), gen, distance=str(spec.get("distance", "hamming")))
    if kind == "euclidean-1d":
        return sample_euclidean_approval(m, n, 1, float(spec.get("radius")), gen)
    if kind == "euclidean-2d":
        return sample_euclidean_approval(m, n, 2, float(spec.get("radius")), gen)
    return sample_truncated_urn(m, n, spec.get("p"), float(spec.get("alpha")), gen)


# ---------------------------------------------------------------------------
# Distances
# ---------------------------------------------------------------------------


def hamming(u, v) -> int:
    """Number of candidates approved by exactly one of the two ballots."""
    return len(set(u) ^ set(v))


def jaccard(u, v) -> float:
    """Hamming distance over the size of the union; two empty ballots are at distance 0."""
    a, b = set(u), set(v)
    union = len(a | b)
    return 0.0 if union == 0 else len(a ^ b) / union


def approval_vote_distance(kind: str, u, v) -> float:
    kind = kind.strip().lower()
    if kind == "hamming":
        return float(hamming(u, v))
    if kind == "jaccard":
        return jaccard(u, v)
    raise DomainError(f"unknown approval vote distance {kind!r}; expected 'hamming' or 'jaccard'")


def approvalwise_vector(election: ApprovalElection) -> np.ndarray:
    """Normalized approval scores sorted in non-increasing order."""
    return np.sort(election.approval_scores() / election.num_voters)[::-1]


def approvalwise_distance(e1: ApprovalElection, e2: ApprovalElection) -> float:
    if e1.num_candidates != e2.num_candidates:
        raise SizeMismatchError("approvalwise distance needs equal numbers of candidates")
    return l1(approvalwise_vector(e1), approvalwise_vector(e2))


def grid_vector(p: float, phi: float, m: int) -> np.ndarray:
    """Limit approvalwise vector of the resampling model.

    The ``floor(p m)`` centrally approved candidates are approved with
    probability ``(1 - phi) + phi p``, the others with probability ``phi p``.
    """
    p, phi = _unit(p, "p"), _unit(phi, "phi")
    k = int(math.floor(p * m))
    return np.concatenate([np.full(k, (1 - phi) + phi * p), np.full(m - k, phi * p)])


def grid_distance(p: float, phi: float, p2: float, phi2: float, m: int) -> float:
    """Approvalwise distance between the limit vectors of two resampling elections."""
    return l1(grid_vector(p, phi, m), grid_vector(p2, phi2, m))


def _hamming_costs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``cost[i, j]`` = Hamming distance between row ``i`` of ``a`` and row ``j`` of ``b``."""
    ai = a.astype(np.int64)
    bi = b.astype(np.int64)
    return ai.sum(1)[:, None] + bi.sum(1)[None, :] - 2 * ai @ bi.T


def _sorted_l1(x: np.ndarray, y: np.ndarray) -> float:
    return float(np.abs(np.sort(x) - np.sort(y)).sum())


def _check_hamming_inputs(e1: ApprovalElection, e2: ApprovalElection, max_candidates: int) -> None:
    if e1.num_candidates != e2.num_candidates or e1.num_voters != e2.num_voters:
        raise SizeMismatchError("isomorphic Hamming distance needs equal numbers of candidates and voters")
    if e1.num_candidates > max_candidates:
        raise BudgetExceededError(
            f"isomorphic Hamming distance is limited to {max_candidates} candidates, got {e1.num_candidates}"
        )


def isomorphic_hamming_brute_force(e1: ApprovalElection, e2: ApprovalElection, max_candidates: int = HAMMING_MAX_CANDIDATES) -> int:
    """Minimum over all candidate bijections of the optimal voter assignment cost."""
    _check_hamming_inputs(e1, e2, max_candidates)
    a, b = e1.matrix, e2.matrix
    best = math.inf
    for perm in itertools.permutations(range(e1.num_candidates)):
        renamed = np.zeros_like(a)
        renamed[:, list(perm)] = a
        best = min(best, assignment_value(_hamming_costs(renamed, b)))
    return int(round(best))


class _HammingSearch:
    """Branch and bound over candidate bijections for the isomorphic Hamming distance.

    Candidates of the first election are fixed one at a time (most approved
    first).  For a partial bijection, a voter pair costs at least its mismatch
    on the fixed candidates plus the difference of its remaining approval
    counts; the optimal voter assignment on that matrix is a lower bound.  A
    second bound adds the optimal assignment on the fixed-candidate mismatch
    alone to the sorted score difference of the free candidates.  Target candidates of the second
    election with identical columns are interchangeable, so only the first
    unused member of each such class is tried.
    """

    def __init__(self, a: np.ndarray, b: np.ndarray, node_budget: int | None):
        self.a = a.astype(np.int64)
        self.b = b.astype(np.int64)
        self.m = a.shape[1]
        self.sa = self.a.sum(0)
        self.sb = self.b.sum(0)
        self.node_budget = node_budget
        self.nodes = 0
        _, inverse = np.unique(b.T, axis=0, return_inverse=True)
        self.b_class = inverse.ravel()
        self.order = sorted(range(self.m), key=lambda c: (-self.sa[c], c))

    def value(self, sigma: np.ndarray) -> int:
        renamed = np.zeros_like(self.a)
        renamed[:, sigma] = self.a
        return int(round(assignment_value(_hamming_costs(renamed, self.b))))

    def _alternate(self, sigma: np.ndarray) -> tuple[int, np.ndarray]:
        """Alternately re-optimize the voter matching and the candidate bijection."""
        best = self.value(sigma)
        while best > 0:
            renamed = np.zeros_like(self.a)
            renamed[:, sigma] = self.a
            _, rho = min_cost_assignment(_hamming_costs(renamed, self.b))
            matched = self.b[rho]
            # cost of sending candidate c to d under the fixed voter matching
            column_cost = self.sa[:, None] + self.sb[None, :] - 2 * self.a.T @ matched
            _, new_sigma = min_cost_assignment(column_cost)
            value = self.value(new_sigma)
            if value >= best:
                break
            best, sigma = value, new_sigma
        return best, sigma

    def initial(self) -> tuple[int, np.ndarray]:
        """Match candidates by score rank, then alternate and try pairwise target swaps."""
        sigma = np.empty(self.m, dtype=np.int64)
        ranked_a = sorted(range(self.m), key=lambda c: (-self.sa[c], c))
        ranked_b = sorted(range(self.m), key=lambda d: (-self.sb[d], d))
        sigma[ranked_a] = ranked_b
        best, sigma = self._alternate(sigma)
        improved = True
        while improved and best > 0:
            improved = False
            for i in range(self.m):
                for j in range(i + 1, self.m):
                    if self.b_class[sigma[i]] == self.b_class[sigma[j]]:
                        continue
                    sigma[i], sigma[j] = sigma[j], sigma[i]
                    value = self.value(sigma)
                    if value < best:
                        best, improved = value, True
                        best, sigma = self._alternate(sigma)
                    else:
                        sigma[i], sigma[j] = sigma[j], sigma[i]
        return best, sigma

    def run(self) -> int:
        self.best, sigma = self.initial()
        n = self.a.shape[0]
        if self.best == 0:
            return 0
        mismatch = np.zeros((n, n), dtype=np.int64)
        rest_a = self.a.sum(1)
        rest_b = self.b.sum(1)
        self._dfs(0, mismatch, rest_a, rest_b, [False] * self.m, 0, [])
        return self.best

    def _bound(self, mismatch, rest_a, rest_b, score_part: int, free_a: list[int], free_b: list[int]) -> float:
        # cheapest first: each bound is only computed if the previous one did not prune
        free = _sorted_l1(self.sa[free_a], self.sb[free_b])
        score_bound = score_part + free
        if score_bound >= self.best:
            return score_bound
        fixed_bound = assignment_value(mismatch) + free
        if fixed_bound >= self.best:
            return fixed_bound
        voter_bound = assignment_value(mismatch + np.abs(rest_a[:, None] - rest_b[None, :]))
        return max(fixed_bound, voter_bound)

    def _dfs(self, depth, mismatch, rest_a, rest_b, used, score_part, assigned) -> None:
        if depth == self.m:
            self.best = min(self.best, int(round(assignment_value(mismatch))))
            return
        self.nodes += 1
        if self.node_budget is not None and self.nodes > self.node_budget:
            raise BudgetExceededError(f"isomorphic Hamming search exceeded {self.node_budget} nodes")
        c = self.order[depth]
        col_a = self.a[:, c]
        seen_classes: set[int] = set()
        targets = []
        for d in range(self.m):
            if used[d] or self.b_class[d] in seen_classes:
                continue
            seen_classes.add(self.b_class[d])
            targets.append(d)
        targets.sort(key=lambda d: (abs(int(self.sa[c]) - int(self.sb[d])), d))
        free_a = self.order[depth + 1 :]
        for d in targets:
            col_b = self.b[:, d]
            child = mismatch + (col_a[:, None] ^ col_b[None, :])
            child_rest_a = rest_a - col_a
            child_rest_b = rest_b - col_b
            used[d] = True
            free_b = [x for x in range(self.m) if not used[x]]
            part = score_part + abs(int(self.sa[c]) - int(self.sb[d]))
            if self._bound(child, child_rest_a, child_rest_b, part, free_a, free_b) < self.best:
                self._dfs(depth + 1, child, child_rest_a, child_rest_b, used, part, assigned)
            used[d] = False
            if self.best == 0:
                return


def isomorphic_hamming_distance(
    e1: ApprovalElection,
    e2: ApprovalElection,
    *,
    max_candidates: int = HAMMING_MAX_CANDIDATES,
    node_budget: int | None = None,
    method: str = "auto",
) -> int:
    """Minimum total Hamming distance over candidate bijections and voter matchings.

    Args:
        max_candidates: refuse larger instances (the problem is NP-hard).
        node_budget: optional cap on branch-and-bound nodes.
        method: ``"brute-force"``, ``"branch-and-bound"`` or ``"auto"``
            (branch and bound from five candidates on).

    Raises:
        SizeMismatchError: the elections differ in size.
        BudgetExceededError: too many candidates or nodes.
    """
    _check_hamming_inputs(e1, e2, max_candidates)
    if method not in ("auto", "brute-force", "branch-and-bound"):
        raise DomainError(f"unknown method {method!r}")
    if method == "brute-force" or (method == "auto" and e1.num_candidates < 5):
        return isomorphic_hamming_brute_force(e1, e2, max_candidates)
    a, b = e1.matrix, e2.matrix
    # the symmetry reduction acts on the target side, so put the election with
    # fewer distinct candidate columns there
    if len(np.unique(a.T, axis=0)) < len(np.unique(b.T, axis=0)):
        a, b = b, a
    return _HammingSearch(a, b, node_budget).run()


# ---------------------------------------------------------------------------
# Statistics and committee rules
# ---------------------------------------------------------------------------


def max_approval_score(election: ApprovalElection) -> float:
    """Highest approval score divided by the number of voters."""
    return float(election.approval_scores().max() / election.num_voters)


def _voter_masks(election: ApprovalElection) -> list[int]:
    """Per candidate, the set of its approvers as an integer bitmask."""
    masks = []
    for column in election.matrix.T:
        mask = 0
        for i in np.flatnonzero(column):
            mask |= 1 << int(i)
        masks.append(mask)
    return masks


def cohesiveness_level(election: ApprovalElection, k: int, *, budget: int = SUBSET_BUDGET) -> int:
    """Largest ``l`` such that some ``l``-cohesive group exists for committee size ``k``.

    A group is ``l``-cohesive when it has at least ``l n / k`` voters who jointly
    approve at least ``l`` candidates.  Equivalently some ``l`` candidates are
    all approved by at least ``l n / k`` voters.  Candidate sets are grown one
    member at a time, keeping only sets whose common supporters still meet the
    next threshold, so every set examined extends a surviving smaller set.

    Raises:
        BudgetExceededError: more than ``budget`` candidate sets examined.
    """
    if k < 1:
        raise ParameterError("committee size must be positive")
    n, m = election.num_voters, election.num_candidates
    masks = _voter_masks(election)
    frontier: list[tuple[tuple[int, ...], int]] = [((), (1 << n) - 1)]
    level = 0
    examined = 0
    for ell in range(1, min(k, m) + 1):
        need = ell * n / k
        grown = []
        for members, support in frontier:
            start = members[-1] + 1 if members else 0
            for c in range(start, m):
                examined += 1
                if examined > budget:
                    raise BudgetExceededError(f"cohesiveness search exceeded {budget} candidate sets")
                joint = support & masks[c]
                if joint.bit_count() >= need:
                    grown.append((members + (c,), joint))
        if not grown:
            break
        level = ell
        # survivors for the next level must already meet its stricter threshold
        next_need = (ell + 1) * n / k
        frontier = [(s, sup) for s, sup in grown if sup.bit_count() >= next_need]
        if not frontier:
            break
    return level


def voters_in_1cohesive(election: ApprovalElection, k: int) -> float:
    """Fraction of voters belonging to some 1-cohesive group.

    A voter belongs to one exactly when they approve a candidate approved by at
    least ``n / k`` voters.
    """
    if k < 1:
        raise ParameterError("committee size must be positive")
    n = election.num_voters
    popular = election.approval_scores() * k >= n
    covered = election.matrix[:, popular].any(axis=1)
    return float(covered.mean())


def av_committee(election: ApprovalElection, k: int) -> tuple[tuple[int, ...], int]:
    """The ``k`` highest approval scores (lowest index first among ties) and their total."""
    m = election.num_candidates
    if not 1 <= k <= m:
        raise ParameterError(f"committee size must be in 1..{m}, got {k}")
    scores = election.approval_scores()
    order = sorted(range(m), key=lambda c: (-scores[c], c))[:k]
    return tuple(sorted(order)), int(scores[order].sum())


def harmonic(x: int) -> float:
    return float(sum(1.0 / j for j in range(1, x + 1)))


def pav_score(election: ApprovalElection, committee) -> float:
    members = sorted(set(int(c) for c in committee))
    hits = election.matrix[:, members].sum(axis=1)
    table = np.cumsum(np.concatenate([[0.0], 1.0 / np.arange(1, len(members) + 1)]))
    return float(table[hits].sum())


def _seq_pav(election: ApprovalElection, k: int) -> tuple[int, ...]:
    chosen: list[int] = []
    for _ in range(k):
        best_c, best_value = -1, -math.inf
        for c in range(election.num_candidates):
            if c in chosen:
                continue
            value = pav_score(election, chosen + [c])
            if value > best_value + 1e-9:
                best_c, best_value = c, value
        chosen.append(best_c)
    return tuple(sorted(chosen))


def pav_committee(
    election: ApprovalElection, k: int, mode: str = "exact", *, budget: int = SUBSET_BUDGET
) -> tuple[tuple[int, ...], float]:
    """Committee maximizing the PAV score.

    ``mode="exact"`` enumerates all ``C(m, k)`` committees (ties go to the
    lexicographically smallest) and raises when that exceeds ``budget``.
    ``mode="budget"`` does the same when affordable and otherwise returns the
    sequential (greedy) PAV committee.
    """
    m = election.num_candidates
    if not 1 <= k <= m:
        raise ParameterError(f"committee size must be in 1..{m}, got {k}")
    if mode not in ("exact", "budget"):
        raise DomainError(f"unknown PAV mode {mode!r}; expected 'exact' or 'budget'")
    total = math.comb(m, k)
    if total > budget:
        if mode == "exact":
            raise BudgetExceededError(f"{total} committees exceed the enumeration budget of {budget}")
        committee = _seq_pav(election, k)
        return committee, pav_score(election, committee)
    matrix = election.matrix.astype(np.int64)
    table = np.cumsum(np.concatenate([[0.0], 1.0 / np.arange(1, k + 1)]))
    best_value, best = -math.inf, ()
    combos = itertools.combinations(range(m), k)
    while True:
        chunk = list(itertools.islice(combos, 4096))
        if not chunk:
            break
        block = np.array(chunk)
        hits = matrix[:, block].sum(axis=2)  # (n, chunk)
        values = table[hits].sum(axis=0)
        i = int(np.argmax(values))
        if values[i] > best_value + 1e-9:
            best_value, best = float(values[i]), tuple(int(c) for c in block[i])
    return best, best_value
