"""Reproducible datasets of sampled elections."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .approval import ApprovalCultureSpec, sample_approval
from .core import ApprovalElection, OrdinalElection
from .cultures import CultureSpec, dataset_seed, sample_election
from .errors import ConfigError


@dataclass(frozen=True)
class DatasetEntry:
    """``count`` elections of size ``m x n`` from one culture.

    Attributes:
        culture: culture specification string (see :mod:`electionmap.cultures`).
        label: prefix of the election labels; election ``j`` of this entry is
            ``f"{label}_{j}"`` (or just ``label`` when ``count == 1``).
        color: free-form styling hint carried into maps.
    """

    culture: str
    count: int
    m: int
    n: int
    label: str
    color: str = "black"

    def __post_init__(self):
        if self.count < 1:
            raise ConfigError(f"entry {self.label!r}: count must be at least 1")
        if self.m < 1 or self.n < 1:
            raise ConfigError(f"entry {self.label!r}: m and n must be positive")
        CultureSpec.parse(self.culture)  # fail early on unknown cultures


@dataclass(frozen=True)
class DatasetItem:
    label: str
    family: str
    culture: str
    seed: int
    election: OrdinalElection
    color: str


def generate_dataset(entries: Sequence[DatasetEntry], base_seed: int) -> list[DatasetItem]:
    """Sample every entry; the election with global index ``i`` uses seed ``base_seed ^ i``."""
    items: list[DatasetItem] = []
    labels: set[str] = set()
    index = 0
    for entry in entries:
        spec = CultureSpec.parse(entry.culture)
        for j in range(entry.count):
            label = entry.label if entry.count == 1 else f"{entry.label}_{j}"
            if label in labels:
                raise ConfigError(f"duplicate election label {label!r}")
            labels.add(label)
            seed = dataset_seed(base_seed, index)
            election = sample_election(spec, entry.m, entry.n, seed)
            items.append(DatasetItem(label, entry.label, entry.culture, seed, election, entry.color))
            index += 1
    return items


def testbed_entries(m: int = 10, n: int = 50) -> list[DatasetEntry]:
    """The 340 culture elections plus four compass elections of the standard map."""
    rows = [
        ("ic", 20, "IC", "black"),
        ("urn:alpha=gamma(0.8,1)", 60, "Urn", "orange"),
        ("norm-mallows:phi=uniform(0,1)", 60, "Norm-Mallows", "blue"),
        ("gs-balanced", 20, "GS-Balanced", "green"),
        ("gs-caterpillar", 20, "GS-Caterpillar", "darkgreen"),
        ("conitzer", 20, "Conitzer", "red"),
        ("walsh", 20, "Walsh", "darkred"),
        ("spoc", 20, "SPOC", "purple"),
        ("single-crossing", 20, "Single-Crossing", "brown"),
        ("interval", 20, "Interval", "cyan"),
        ("disc", 20, "Disc", "teal"),
        ("cube", 20, "Cube", "gray"),
        ("circle", 20, "Circle", "magenta"),
        ("id", 1, "ID", "black"),
        ("an", 1, "AN", "black"),
        ("un", 1, "UN", "black"),
        ("st", 1, "ST", "black"),
    ]
    return [DatasetEntry(culture, count, m, n, label, color) for culture, count, label, color in rows]


def reduced_testbed(m: int = 6, n: int = 50, base_seed: int = 2024, stride: int = 5) -> list[DatasetItem]:
    """A thinned testbed on which exact swap distances are affordable.

    The full testbed is generated with ``testbed_entries(m, n)`` and
    ``base_seed``; every ``stride``-th election of each family is kept, so the
    composition of the map is preserved while the number of pairs shrinks by
    roughly ``stride**2``.  The compass elections are always kept.
    """
    items = generate_dataset(testbed_entries(m, n), base_seed)
    kept, seen = [], {}
    for item in items:
        position = seen.get(item.family, 0)
        seen[item.family] = position + 1
        if position % stride == 0:
            kept.append(item)
    return kept


@dataclass(frozen=True)
class ApprovalItem:
    label: str
    family: str
    culture: str
    seed: int
    election: ApprovalElection


def generate_approval_dataset(entries: Sequence[tuple[str, int, str]], m: int, n: int, base_seed: int) -> list[ApprovalItem]:
    """Sample ``(culture, count, label)`` rows; global index ``i`` uses seed ``base_seed ^ i``."""
    items: list[ApprovalItem] = []
    index = 0
    for culture, count, label in entries:
        spec = ApprovalCultureSpec.parse(culture)
        for j in range(count):
            seed = dataset_seed(base_seed, index)
            name = label if count == 1 else f"{label}_{j}"
            items.append(ApprovalItem(name, label, culture, seed, sample_approval(spec, m, n, seed)))
            index += 1
    if len({item.label for item in items}) != len(items):
        raise ConfigError("duplicate approval election labels")
    return items


def approval_mix_entries() -> list[tuple[str, int, str]]:
    """A mixed approval dataset, roughly a tenth of the composition used for the metric comparison."""
    return [
        ("disjoint:p=uniform(0.1,0.5),phi=uniform(0,0.3),g=2", 4, "Disjoint"),
        ("noise:p=uniform(0,1),phi=uniform(0,1)", 5, "Noise"),
        ("moving:p=uniform(0,1),phi=uniform(0,0.5)", 5, "Moving"),
        ("truncated-urn:p=uniform(0,1),alpha=gamma(0.8,1)", 5, "Truncated-Urn"),
        ("euclidean-1d:radius=uniform(0.05,0.25)", 3, "Interval"),
        ("euclidean-2d:radius=uniform(0.1,0.4)", 2, "Square"),
        ("resampling:p=uniform(0,1),phi=uniform(0,1)", 13, "Resampling"),
        ("ic:p=uniform(0,1)", 2, "IC"),
        ("id:p=uniform(0,1)", 2, "ID"),
        ("ic:p=0.5", 1, "0.5-IC"),
        ("id:p=0.5", 1, "0.5-ID"),
        ("empty", 1, "Empty"),
        ("full", 1, "Full"),
    ]
