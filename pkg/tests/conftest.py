import numpy as np
import pytest

S2 = 1.0 / np.sqrt(2.0)


def ghz(n):
    psi = np.zeros(2**n, dtype=complex)
    psi[0] = psi[-1] = S2
    return psi


def w3():
    psi = np.zeros(8, dtype=complex)
    psi[[1, 2, 4]] = 1.0 / np.sqrt(3.0)
    return psi


def haar_state(rng, n):
    z = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return z / np.linalg.norm(z)


def random_unitary(rng):
    z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def dense_single(gate, q, n):
    """Full 2**n matrix of a one-qubit gate; test oracle only."""
    out = np.eye(1)
    for k in reversed(range(n)):
        out = np.kron(out, gate if k == q else np.eye(2))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# one verdict line per acceptance criterion, echoed after the run
VERDICTS: list[str] = []


@pytest.fixture
def verdict():
    def record(label: str, ok: bool, detail: str = ""):
        VERDICTS.append(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")
        assert ok, f"{label}: {detail}"
    return record


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in VERDICTS:
            terminalreporter.write_line(line)
