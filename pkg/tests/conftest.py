import random
import time

import pytest
from hypothesis import HealthCheck, settings

from aaknots.corpus import random_alternating_knots
from aaknots.generate import EnumConfig, enumerate_unknot_diagrams

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# one line per acceptance criterion, printed in the terminal summary
CRITERIA: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(CRITERIA):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def corpus12():
    """The 12-crossing unknot corpus and the seconds it took to build."""
    t = time.perf_counter()
    diagrams = enumerate_unknot_diagrams(EnumConfig(12))
    return diagrams, time.perf_counter() - t


@pytest.fixture(scope="session")
def small_corpus():
    return enumerate_unknot_diagrams(EnumConfig(8))


@pytest.fixture(scope="session")
def alternating_knots():
    gen = random_alternating_knots(random.Random(20261016), 3, 11)
    return [next(gen) for _ in range(60)]
