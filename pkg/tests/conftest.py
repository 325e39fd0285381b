import math

import numpy as np
import pytest

from ddsense.core import PathParams, PathSet, SystemConfig, generate_pilots

FIG1_PATH = PathParams(1.0, 0.0, 3.33e-6, 500.0)
FIG3_PATHS = PathSet([
    PathParams(0.7, math.pi / 3, 3.33e-6, 500.0),
    PathParams(0.3, 3 * math.pi / 4, 5e-6, 2500.0),
])


@pytest.fixture
def cfg12():
    return SystemConfig(12, 12, 15e3)


@pytest.fixture
def pilots12():
    return generate_pilots(12, 12, 42)


def rel_err(a, b):
    return np.linalg.norm(a - b) / np.linalg.norm(b)


def nonzero_per_row(A, rel=1e-9):
    mask = np.abs(A) > rel * np.abs(A).max()
    return mask.sum(axis=1)


_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    """Record one summary line per acceptance criterion."""

    def record(criterion, passed, detail):
        _ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  {criterion}: {detail}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
