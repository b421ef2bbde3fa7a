import numpy as np
import pytest

# 3x3 example with Psi = 4 used across the suite
A3 = np.array(
    [[1, 1 - 3j, -2 + 1j], [-1 - 3j, 2, 1 + 1j], [2 + 1j, 1 - 1j, 3]], dtype=np.complex128
) / 4

HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)

_VERDICTS = []


@pytest.fixture
def verdict(request):
    """Record a one-line PASS/FAIL verdict for the acceptance summary."""

    def record(label, ok, detail=""):
        _VERDICTS.append(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)


@pytest.fixture
def a3():
    return A3.copy()
