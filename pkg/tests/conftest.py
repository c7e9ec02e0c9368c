import numpy as np
import pytest

# one line per exit criterion, printed at the end of the session
ACCEPTANCE_LINES: list[str] = []


def record(criterion: int, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion:2d}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)


def random_unitary(rng, n):
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_hermitian_pd(rng, n, kappa_max=50.0):
    U = random_unitary(rng, n)
    lam = np.exp(rng.uniform(0, np.log(kappa_max), n))
    return (U * lam) @ U.conj().T


def random_normal_accretive(rng, n):
    U = random_unitary(rng, n)
    lam = rng.uniform(0.1, 3.0, n) + 1j * rng.uniform(-4.0, 4.0, n)
    return (U * lam) @ U.conj().T


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
