import numpy as np
import pytest

from projconst.linalg import orthonormalize_rows

ACCEPTANCE_LINES = []


def random_parseval(m, N, field="real", seed=0):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, N))
    if field == "complex":
        A = A + 1j * rng.standard_normal((m, N))
    return orthonormalize_rows(A)


@pytest.fixture
def record_acceptance():
    def record(number, passed, detail):
        ACCEPTANCE_LINES.append(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
