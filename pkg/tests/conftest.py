import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from focalpoints.dst import MassFunction  # noqa: E402
from focalpoints.lattice import Frame  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=400, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def abc():
    return Frame("abc")


@pytest.fixture
def abcd():
    return Frame("abcd")


@pytest.fixture
def m_abc(abc):
    """Four focal sets on {a, b, c}; the core carries mass so every weight exists."""
    return MassFunction.from_labels(abc, {"abc": 0.1, "ab": 0.1, "bc": 0.2, "a": 0.6})


@pytest.fixture
def sources(abcd):
    m1 = MassFunction.from_labels(abcd, {"ab": 0.2, "bc": 0.2, "a": 0.6})
    m2 = MassFunction.from_labels(abcd, {"bc": 0.3, "cd": 0.1, "c": 0.6})
    return m1, m2


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
