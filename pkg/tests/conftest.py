import re

import numpy as np
import pytest
from hypothesis import settings, strategies as st

from unirates.core import STAR, ConceptClass

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def total_classes(draw, max_n=4, max_k=2, max_size=10, min_size=1):
    n = draw(st.integers(1, max_n))
    k = draw(st.integers(1, max_k))
    rows = draw(st.lists(st.tuples(*[st.integers(0, k)] * n), min_size=min_size, max_size=max_size))
    return ConceptClass(k, n, tuple(rows))


@st.composite
def partial_classes(draw, max_n=4, max_k=1, max_size=8):
    n = draw(st.integers(1, max_n))
    k = draw(st.integers(1, max_k))
    rows = draw(st.lists(st.tuples(*[st.integers(STAR, k)] * n), min_size=1, max_size=max_size))
    return ConceptClass(k, n, tuple(rows), partial=True)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_criteria: dict[int, str] = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_criterion_(\d+)", report.nodeid)
    if not m or report.when not in ("setup", "call"):
        return
    num = int(m.group(1))
    if report.failed:
        _criteria[num] = "FAIL"
    elif report.when == "call" and report.passed:
        _criteria.setdefault(num, "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in range(1, 14):
        terminalreporter.write_line(f"criterion {num:2d}: {_criteria.get(num, 'NOT RUN')}")
