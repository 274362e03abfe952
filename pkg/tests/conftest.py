"""Shared fixtures and hypothesis strategies."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from electionmap.core import ApprovalElection, OrdinalElection

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

A, B, C, D, E = range(5)


def votes_from_letters(*rows: str, alphabet: str = "abcdefghijklmnopqrstuvwxyz") -> OrdinalElection:
    """``votes_from_letters("abc", "bac")`` with ``alphabet[0]`` as candidate 0."""
    return OrdinalElection.from_votes([[alphabet.index(ch) for ch in row] for row in rows])


@st.composite
def elections(draw, min_m=1, max_m=5, min_n=1, max_n=6, m=None, n=None):
    m = draw(st.integers(min_m, max_m)) if m is None else m
    n = draw(st.integers(min_n, max_n)) if n is None else n
    votes = [draw(st.permutations(range(m))) for _ in range(n)]
    return OrdinalElection.from_votes(votes, m)


@st.composite
def election_pairs(draw, min_m=1, max_m=5, min_n=1, max_n=6):
    m = draw(st.integers(min_m, max_m))
    n = draw(st.integers(min_n, max_n))
    return draw(elections(m=m, n=n)), draw(elections(m=m, n=n))


@st.composite
def approval_elections(draw, min_m=1, max_m=5, min_n=1, max_n=6, m=None, n=None):
    m = draw(st.integers(min_m, max_m)) if m is None else m
    n = draw(st.integers(min_n, max_n)) if n is None else n
    bits = draw(st.lists(st.lists(st.booleans(), min_size=m, max_size=m), min_size=n, max_size=n))
    return ApprovalElection.from_matrix(np.array(bits, dtype=bool).reshape(n, m))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def positionwise_example():
    """Three-voter pair whose positionwise, pairwise and Bordawise distances are all 2."""
    e1 = votes_from_letters("abc", "bac", "bca")
    e2 = votes_from_letters("abc", "cab", "bac")  # x, y, z renamed a, b, c
    return e1, e2


@pytest.fixture
def rules_example():
    return votes_from_letters("acbde", "acbed", "debca", "bedca", "cbeda")


@pytest.fixture
def committee_example():
    return votes_from_letters("abcd", "abcd", "abcd", "dcba")


# Outcome of each acceptance criterion, filled in by tests/test_acceptance.py
# and printed at the end of the run.
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def report_criterion(key: str, passed: bool, detail: str) -> bool:
    ACCEPTANCE[key] = (passed, detail)
    print(f"criterion {key}: {'PASS' if passed else 'FAIL'} ({detail})")
    return passed


def _criterion_order(key: str):
    number = "".join(ch for ch in key if ch.isdigit())
    return int(number or 0), key


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=_criterion_order):
        passed, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if passed else 'FAIL'} - {detail}")
