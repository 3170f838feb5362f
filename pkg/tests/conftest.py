import time

import numpy as np
import pytest

from memcorr.sweep import distinct_figure_configs, run_sweep

_ACCEPTANCE_LINES = []


def random_density(rng, dim=4, rank=None):
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_x_state(rng):
    """Random valid X state: two independent 2x2 positive blocks."""
    outer = random_density(rng, 2)  # on |00>, |11>
    inner = random_density(rng, 2)  # on |01>, |10>
    w = rng.uniform()
    rho = np.zeros((4, 4), dtype=complex)
    idx_o, idx_i = [0, 3], [1, 2]
    rho[np.ix_(idx_o, idx_o)] = w * outer
    rho[np.ix_(idx_i, idx_i)] = (1 - w) * inner
    return rho


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture(scope="session")
def figure_sweeps():
    """All distinct figure sweeps at the default grid, computed once."""
    start = time.perf_counter()
    sweeps = [(cfg, run_sweep(cfg)) for cfg in distinct_figure_configs()]
    return {"sweeps": sweeps, "elapsed": time.perf_counter() - start}


@pytest.fixture
def acceptance_log():
    return _ACCEPTANCE_LINES.append


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
