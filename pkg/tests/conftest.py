import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_hermitian(rng, n=8):
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return x + x.conj().T


def random_density(rng, n=8, rank=None):
    rank = rank or n
    x = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    rho = x @ x.conj().T
    return rho / np.trace(rho).real


ACCEPTANCE_LINES: dict = {}


def report(criterion: int, passed: bool, detail: str) -> None:
    ACCEPTANCE_LINES[criterion] = f"[{'PASS' if passed else 'FAIL'}] criterion {criterion:>2}: {detail}"


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
