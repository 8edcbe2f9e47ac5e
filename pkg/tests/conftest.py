import os
import sys

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from freebycyclic.automorphisms import make_automorphism
from freebycyclic.words import Word

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    max_examples=200,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))


def words(rank: int = 2, max_size: int = 12):
    letters = st.sampled_from([i for r in range(1, rank + 1) for i in (r, -r)])
    return st.lists(letters, max_size=max_size).map(lambda ls: Word(ls, rank))


@pytest.fixture(scope="session")
def swap():
    return make_automorphism(["b", "a"])


@pytest.fixture(scope="session")
def rot4():
    return make_automorphism(["b", "A"])


@pytest.fixture(scope="session")
def theta_rot():
    # induced by cycling the three edges of the theta graph
    return make_automorphism(["bA", "A"])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
