import numpy as np
import pytest

from qobdd.program import build_rotation_program


@pytest.fixture
def p2():
    """Parity program: n=2, theta=pi/2, F={1}."""
    return build_rotation_program(2, np.pi / 2, {1})


@pytest.fixture
def double_parity():
    """Two layers of theta=pi/4; composite rotation by t*pi/2."""
    return build_rotation_program(2, np.pi / 4, {1}, k=2)


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one pass/fail line for the acceptance summary."""
    def record(label, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] {label}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
