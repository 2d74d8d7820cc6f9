import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_spd(rng, n, shift=0.1):
    A = rng.standard_normal((n, n))
    return A @ A.T + shift * np.eye(n)


def random_graph(rng, n, p=0.4):
    W = np.triu((rng.random((n, n)) < p) * rng.random((n, n)), 1)
    return W + W.T


def random_views(rng, dims, n):
    return [rng.standard_normal((D, n)) for D in dims]


def orth_rows(rng, d, n):
    Q, _ = np.linalg.qr(rng.standard_normal((n, d)))
    return Q.T


ACCEPTANCE = {}


@pytest.fixture
def report():
    """Record one acceptance line: report(number, passed, detail)."""
    def record(number, passed, detail):
        ACCEPTANCE[number] = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
        print(ACCEPTANCE[number])
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
