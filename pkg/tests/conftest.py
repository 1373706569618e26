import numpy as np
import pytest

from cascade_grid import _backend
from cascade_grid.graphcore import build_graph
from cascade_grid.netgen import grid_from_assignment


@pytest.fixture(params=_backend.available_backends())
def backend(request):
    with _backend.use_backend(request.param) as mod:
        yield mod


def random_simple_graph(rng, n, p):
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(len(iu)) < p
    return build_graph(n, np.column_stack([iu[keep], ju[keep]]))


def random_grid(rng, n_a, n_b, p_a=0.4, p_b=0.5):
    comm = random_simple_graph(rng, n_a, p_a)
    power = random_simple_graph(rng, n_b, p_b)
    return grid_from_assignment(comm, power, rng.integers(0, n_b, size=n_a))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
