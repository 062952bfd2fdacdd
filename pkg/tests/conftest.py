import numpy as np
import pytest

from qperceptron.statevector import Gate


def dense_unitary(gate: Gate, n: int) -> np.ndarray:
    """Reference 2**n x 2**n matrix for ``gate`` built column by column from its truth table."""
    dim = 1 << n
    u = np.zeros((dim, dim), dtype=complex)
    ctrl = all
    for col in range(dim):
        bits = [(col >> q) & 1 for q in range(n)]
        if gate.kind == "H":
            t = gate.target
            zero = col & ~(1 << t)
            one = col | (1 << t)
            s = 1 / np.sqrt(2)
            u[zero, col] += s
            u[one, col] += -s if bits[t] else s
        elif gate.kind in ("X", "MCX"):
            row = col ^ (1 << gate.target) if ctrl(bits[c] for c in gate.controls) else col
            u[row, col] = 1
        else:
            u[col, col] = -1 if ctrl(bits[q] for q in gate.qubits) else 1
    return u


_acceptance_results = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance_results.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance_results:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
