import math

import pytest
from hypothesis import strategies as st

from youngtasep.young import Partition


@st.composite
def partitions(draw, max_size=12):
    n = draw(st.integers(0, max_size))
    parts = []
    while n:
        p = draw(st.integers(1, min(n, parts[-1] if parts else n)))
        parts.append(p)
        n -= p
    return Partition(tuple(parts))


def within_sigma(count, total, p, k=3.0):
    sd = math.sqrt(total * p * (1 - p))
    return abs(count - total * p) <= k * sd


@pytest.fixture
def sigma():
    return within_sigma


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("] ", 1)[1].split(" ", 1)[0])):
            terminalreporter.write_line(line)
