import numpy as np
import pytest

from boostrp.data import Dataset, Task


def random_dataset(rng, n, p, d, task=Task.REGRESSION):
    X = rng.standard_normal((n, p))
    if task is Task.MULTILABEL:
        Y = np.where(rng.random((n, d)) < 0.5, -1.0, 1.0)
        # every output needs both classes for the logistic intercept
        Y[0], Y[1] = 1.0, -1.0
    else:
        W = rng.standard_normal((p, d))
        Y = np.tanh(X @ W) + 0.3 * rng.standard_normal((n, d))
    return Dataset(X, Y, task)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    def record(number, passed, detail):
        ACCEPTANCE_LINES.append((number, f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"))
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
