import numpy as np
import pytest

from hypervekua import catalog


def default_grid():
    """21x21 over [0.2, 1.8] x [0.4, 2.0], kept where x < t - 0.05; row-major in x then t."""
    xs = np.linspace(0.2, 1.8, 21)
    ts = np.linspace(0.4, 2.0, 21)
    X, T = np.meshgrid(xs, ts, indexing="ij")
    X, T = X.ravel(), T.ravel()
    keep = X < T - 0.05
    return X[keep], T[keep]


@pytest.fixture(scope="session")
def grid():
    return default_grid()


@pytest.fixture(scope="session")
def saddle():
    ex = catalog.get_example("saddle")
    return ex, catalog.cached_problem("saddle"), ex.sequence()


@pytest.fixture(scope="session")
def rational():
    ex = catalog.get_example("rational")
    return ex, catalog.cached_problem("rational"), ex.sequence()


@pytest.fixture(scope="session")
def xt_eta():
    ex = catalog.get_example("xt-eta")
    return ex, catalog.cached_problem("xt-eta"), ex.sequence()


def rel_err(num, ref):
    num, ref = np.asarray(num, dtype=float), np.asarray(ref, dtype=float)
    d = np.abs(num - ref)
    return np.where(np.abs(ref) > 0, d / np.where(np.abs(ref) > 0, np.abs(ref), 1.0), d)


CRITERIA: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Record the one-line verdict of an acceptance criterion."""

    def record(k: int, passed: bool, detail: str):
        line = f"criterion {k}: {'PASS' if passed else 'FAIL'}  {detail}"
        CRITERIA[k] = line
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for k in sorted(CRITERIA):
            terminalreporter.write_line(CRITERIA[k])
