"""Election isomorphism, voter subelections and exhaustive subelection oracles.

The polynomial algorithms all rest on one observation: once a voter of one
election is paired with a voter of the other, the candidate bijection is
forced (the ``i``-th candidate of one vote maps to the ``i``-th candidate of
the other).  Under a fixed bijection, two voters are compatible exactly when
their votes coincide after renaming, so the compatibility graph is a disjoint
union of complete bipartite blocks, one per distinct vote.  A maximum matching
of such a graph simply pairs ``min(count_1, count_2)`` voters per block.
"""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .core import OrdinalElection
from .cultures import CultureSpec, as_generator, sample_election
from .errors import DomainError, SizeMismatchError

#: Largest instance (per side) accepted by the exhaustive oracles.
BRUTE_FORCE_LIMIT = 6

SUBELECTION_VARIANTS = ("voter", "candidate", "general")


@dataclass(frozen=True)
class CommonSubelection:
    """A largest pair of isomorphic voter subelections.

    Attributes:
        size: number of voters kept on each side.
        voter_pairs: ``(i, j)`` pairs matching voter ``i`` of the first
            election with voter ``j`` of the second, sorted by ``i``.
        sigma: candidate bijection; ``sigma[c]`` is the image of ``c``.
    """

    size: int
    voter_pairs: tuple[tuple[int, int], ...]
    sigma: tuple[int, ...]


def _rows(election: OrdinalElection) -> list[tuple[int, ...]]:
    return [tuple(row) for row in election.votes.tolist()]


def _bijection_from_pair(vote: Sequence[int], other: Sequence[int]) -> np.ndarray:
    sigma = np.empty(len(vote), dtype=np.int64)
    sigma[np.asarray(vote)] = np.asarray(other)
    return sigma


def _match_under(
    sigma: np.ndarray,
    e1: OrdinalElection,
    rows2: list[tuple[int, ...]],
    allowed: Mapping[int, int] | None,
) -> list[tuple[int, int]]:
    """Maximum voter matching between ``sigma(E1)`` and ``E2``.

    With ``allowed`` (a voter matching), voter ``i`` may only be paired with
    ``allowed[i]``.  Otherwise equal renamed votes are paired in index order.
    """
    renamed = [tuple(row) for row in sigma[e1.votes].tolist()]
    if allowed is not None:
        return [(i, j) for i, j in sorted(allowed.items()) if renamed[i] == rows2[j]]
    waiting: dict[tuple[int, ...], list[int]] = defaultdict(list)
    for j, row in enumerate(rows2):
        waiting[row].append(j)
    used: dict[tuple[int, ...], int] = Counter()
    pairs = []
    for i, row in enumerate(renamed):
        queue = waiting.get(row)
        if queue and used[row] < len(queue):
            pairs.append((i, queue[used[row]]))
            used[row] += 1
    return pairs


def _check_voter_matching(matching: Mapping[int, int] | None, n1: int, n2: int) -> dict[int, int] | None:
    if matching is None:
        return None
    result = {int(i): int(j) for i, j in matching.items()}
    if len(set(result.values())) != len(result):
        raise DomainError("a voter matching must be injective")
    if any(not (0 <= i < n1 and 0 <= j < n2) for i, j in result.items()):
        raise DomainError("voter matching refers to a voter outside the elections")
    return result


def _check_bijection(sigma: Sequence[int], m: int) -> np.ndarray:
    array = np.asarray(sigma, dtype=np.int64)
    if array.shape != (m,) or sorted(array.tolist()) != list(range(m)):
        raise DomainError(f"candidate matching must be a bijection of 0..{m - 1}")
    return array


def max_common_voter_subelection(
    e1: OrdinalElection,
    e2: OrdinalElection,
    *,
    candidate_matching: Sequence[int] | None = None,
    voter_matching: Mapping[int, int] | None = None,
) -> CommonSubelection:
    """Largest ``t`` such that ``t`` voters of each election form isomorphic subelections.

    Every seed pair ``(v, u)`` fixes a candidate bijection; the best matching
    over all seeds is returned.  Seeds are scanned in row-major order and only
    strict improvements are kept, so ties go to the smallest seed indices.
    Seeds whose votes repeat an earlier seed vote give the same bijection and
    are skipped.

    Args:
        candidate_matching: fixed bijection; the seed loop is skipped.
        voter_matching: ``{i: j}``; only these voter pairs may be matched and
            only they are tried as seeds.

    Raises:
        SizeMismatchError: the elections have different numbers of candidates.
    """
    m = e1.num_candidates
    if e2.num_candidates != m:
        raise SizeMismatchError(f"voter subelections need equal candidate counts, got {m} and {e2.num_candidates}")
    allowed = _check_voter_matching(voter_matching, e1.num_voters, e2.num_voters)
    rows1, rows2 = _rows(e1), _rows(e2)
    if candidate_matching is not None:
        sigma = _check_bijection(candidate_matching, m)
        pairs = _match_under(sigma, e1, rows2, allowed)
        return CommonSubelection(len(pairs), tuple(pairs), tuple(sigma.tolist()))

    if allowed is not None:
        seeds = sorted(allowed.items())
    else:
        first1 = list(dict.fromkeys(rows1))
        first2 = list(dict.fromkeys(rows2))
        index1 = {row: rows1.index(row) for row in first1}
        index2 = {row: rows2.index(row) for row in first2}
        seeds = [(index1[a], index2[b]) for a in first1 for b in first2]
    cap = min(e1.num_voters, e2.num_voters) if allowed is None else len(allowed)
    best = CommonSubelection(0, (), tuple(range(m)))
    seen: set[tuple[int, ...]] = set()
    for i, j in seeds:
        sigma = _bijection_from_pair(rows1[i], rows2[j])
        key = tuple(sigma.tolist())
        if key in seen:
            continue
        seen.add(key)
        pairs = _match_under(sigma, e1, rows2, allowed)
        if len(pairs) > best.size:
            best = CommonSubelection(len(pairs), tuple(pairs), key)
            if best.size == cap:
                break
    return best


def verify_common_subelection(e1: OrdinalElection, e2: OrdinalElection, result: CommonSubelection) -> bool:
    """Re-check that a reported matching certifies its size."""
    if len(result.voter_pairs) != result.size:
        return False
    left = [i for i, _ in result.voter_pairs]
    right = [j for _, j in result.voter_pairs]
    if len(set(left)) != len(left) or len(set(right)) != len(right):
        return False
    sigma = np.asarray(result.sigma)
    return all(np.array_equal(sigma[e1.votes[i]], e2.votes[j]) for i, j in result.voter_pairs)


def elections_isomorphic(
    e1: OrdinalElection, e2: OrdinalElection
) -> tuple[bool, tuple[int, ...] | None, tuple[int, ...] | None]:
    """Decide isomorphism; on success also return ``sigma`` and the voter matching ``nu``.

    ``nu[i]`` is the voter of ``e2`` matched with voter ``i`` of ``e1``.  Only
    seeds involving the first voter of ``e1`` are needed, since in any
    isomorphism that voter is matched to somebody.

    Raises:
        SizeMismatchError: the elections differ in size.
    """
    if e1.shape != e2.shape:
        raise SizeMismatchError(f"isomorphic elections have equal sizes, got {e1.shape} and {e2.shape}")
    n = e1.num_voters
    rows2 = _rows(e2)
    first = e1.votes[0]
    for j, row in enumerate(dict.fromkeys(rows2)):
        sigma = _bijection_from_pair(first, row)
        pairs = _match_under(sigma, e1, rows2, None)
        if len(pairs) == n:
            nu = tuple(j for _, j in sorted(pairs))
            return True, tuple(sigma.tolist()), nu
    return False, None, None


def voter_subelection_isomorphic(
    small: OrdinalElection,
    big: OrdinalElection,
    *,
    candidate_matching: Sequence[int] | None = None,
    voter_matching: Mapping[int, int] | None = None,
) -> bool:
    """Whether deleting voters from ``big`` can make it isomorphic to ``small``.

    With a voter matching, every voter of ``small`` must be matched.
    """
    if small.num_candidates != big.num_candidates:
        raise SizeMismatchError("voter subelections keep every candidate; candidate counts differ")
    if small.num_voters > big.num_voters:
        return False
    if voter_matching is not None and len(voter_matching) != small.num_voters:
        raise DomainError("the voter matching must cover every voter of the smaller election")
    result = max_common_voter_subelection(
        small, big, candidate_matching=candidate_matching, voter_matching=voter_matching
    )
    return result.size == small.num_voters


def subelection_isomorphic_with_candidate_matching(
    small: OrdinalElection,
    big: OrdinalElection,
    sigma: Sequence[int],
    *,
    voter_matching: Mapping[int, int] | None = None,
) -> bool:
    """Subelection isomorphism when the candidate matching is given.

    ``sigma[c]`` is the candidate of ``big`` matched with candidate ``c`` of
    ``small``; candidates of ``big`` outside the image are deleted, after
    which only voters remain to be chosen.
    """
    m_small = small.num_candidates
    image = [int(c) for c in sigma]
    if len(image) != m_small or len(set(image)) != m_small:
        raise DomainError("the candidate matching must be injective on the smaller election")
    if any(not 0 <= c < big.num_candidates for c in image):
        raise DomainError("candidate matching points outside the larger election")
    if small.num_voters > big.num_voters:
        return False
    restricted = big.restrict(image)  # candidates renumbered by their rank in sorted(image)
    rank = {c: i for i, c in enumerate(sorted(image))}
    renamed = [rank[c] for c in image]
    return voter_subelection_isomorphic(
        small, restricted, candidate_matching=renamed, voter_matching=voter_matching
    )


# ---------------------------------------------------------------------------
# Exhaustive oracles
# ---------------------------------------------------------------------------


def _check_small(*elections: OrdinalElection) -> None:
    for election in elections:
        if max(election.shape) > BRUTE_FORCE_LIMIT:
            raise DomainError(f"exhaustive oracles are limited to {BRUTE_FORCE_LIMIT} candidates and voters")


def _same_multiset(rows_a: list[tuple[int, ...]], rows_b: list[tuple[int, ...]]) -> bool:
    return sorted(rows_a) == sorted(rows_b)


def brute_force_subelection(small: OrdinalElection, big: OrdinalElection, variant: str = "general") -> bool:
    """Exhaustive subelection isomorphism test for tiny elections.

    Tries every candidate subset of the right size (all candidates for the
    ``"voter"`` variant), every bijection onto it and every voter subset (all
    voters for the ``"candidate"`` variant).
    """
    if variant not in SUBELECTION_VARIANTS:
        raise DomainError(f"unknown variant {variant!r}; expected one of {SUBELECTION_VARIANTS}")
    _check_small(small, big)
    m, n = small.shape
    big_m, big_n = big.shape
    if m > big_m or n > big_n:
        return False
    if variant == "voter" and m != big_m:
        return False
    if variant == "candidate" and n != big_n:
        return False
    small_rows = _rows(small)
    for subset in itertools.combinations(range(big_m), m):
        reduced = big.restrict(subset)
        for perm in itertools.permutations(range(m)):
            renamed = [tuple(perm[c] for c in row) for row in small_rows]
            reduced_rows = _rows(reduced)
            for voters in itertools.combinations(range(big_n), n):
                if _same_multiset(renamed, [reduced_rows[v] for v in voters]):
                    return True
    return False


def brute_force_max_common_voter_subelection(e1: OrdinalElection, e2: OrdinalElection) -> int:
    """Largest common voter subelection by trying voter subsets from the largest size down."""
    _check_small(e1, e2)
    if e1.num_candidates != e2.num_candidates:
        raise SizeMismatchError("voter subelections need equal candidate counts")
    m = e1.num_candidates
    rows1, rows2 = _rows(e1), _rows(e2)
    perms = list(itertools.permutations(range(m)))
    for t in range(min(len(rows1), len(rows2)), 0, -1):
        for left in itertools.combinations(rows1, t):
            for perm in perms:
                renamed = sorted(tuple(perm[c] for c in row) for row in left)
                for right in itertools.combinations(rows2, t):
                    if renamed == sorted(right):
                        return t
    return 0


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------


def culture_similarity_matrix(
    specs: Sequence[CultureSpec | str],
    m: int,
    n: int,
    trials: int,
    rng=None,
) -> tuple[np.ndarray, np.ndarray]:
    """Mean and standard deviation of the matched-vote fraction between cultures.

    For each unordered pair of cultures (including a culture with itself),
    ``trials`` independent election pairs are sampled and the size of their
    largest common voter subelection is divided by ``n``.  Pairs are visited in
    row-major order of the upper triangle and the matrix is mirrored.
    """
    if trials < 1:
        raise DomainError("trials must be positive")
    gen = as_generator(rng)
    specs = [CultureSpec.parse(s) if isinstance(s, str) else s for s in specs]
    k = len(specs)
    mean = np.zeros((k, k))
    std = np.zeros((k, k))
    for a in range(k):
        for b in range(a, k):
            fractions = []
            for _ in range(trials):
                e1 = sample_election(specs[a], m, n, gen)
                e2 = sample_election(specs[b], m, n, gen)
                fractions.append(max_common_voter_subelection(e1, e2).size / n)
            mean[a, b] = mean[b, a] = float(np.mean(fractions))
            std[a, b] = std[b, a] = float(np.std(fractions))
    return mean, std
