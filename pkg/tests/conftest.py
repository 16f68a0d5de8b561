import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from treelip.tree import build_explicit

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def parent_lists(draw, max_vertices=60):
    """Random parent lists with every parent preceding its child."""
    n = draw(st.integers(0, max_vertices - 1))
    return [draw(st.integers(0, i)) for i in range(n)]


def random_tree(rng: np.random.Generator, n_vertices: int, max_branch: int = 4):
    """Random tree with no interior terminal vertices: every level above the last is full of parents."""
    parents = []
    frontier = [0]
    next_id = 1
    while next_id < n_vertices and frontier:
        new = []
        for v in frontier:
            for _ in range(int(rng.integers(1, max_branch + 1))):
                if next_id >= n_vertices:
                    break
                parents.append(v)
                new.append(next_id)
                next_id += 1
        frontier = new
    return build_explicit(parents)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
