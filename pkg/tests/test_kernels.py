import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cascade_grid import _backend, _pykernels
from cascade_grid.graphcore import build_graph

from conftest import random_simple_graph

needs_ext = pytest.mark.skipif("cython" not in _backend.available_backends(), reason="extension not built")


def test_fallback_always_available():
    assert "python" in _backend.available_backends()


def test_use_backend_restores():
    before = _backend.BACKEND
    with _backend.use_backend("python"):
        assert _backend.kernels is _pykernels
    assert _backend.BACKEND == before


@needs_ext
@settings(max_examples=60, deadline=None)
@given(n=st.integers(0, 40), p=st.floats(0, 0.3), kill=st.floats(0, 0.6), seed=st.integers(0, 2**32 - 1))
def test_component_kernels_agree(n, p, kill, seed):
    from cascade_grid import _ckernels

    rng = np.random.default_rng(seed)
    g = random_simple_graph(rng, n, p)
    alive = (rng.random(n) >= kill).astype(np.uint8)
    labels_py, sizes_py = _pykernels.component_labels(g.indptr, g.indices, alive)
    labels_c, sizes_c = _ckernels.component_labels(g.indptr, g.indices, alive)
    assert np.array_equal(labels_py, labels_c)
    assert np.array_equal(sizes_py, sizes_c)
    assert np.array_equal(_pykernels.alive_degrees(g.indptr, g.indices, alive),
                          _ckernels.alive_degrees(g.indptr, g.indices, alive))
    a1, a2 = alive.copy(), alive.copy()
    assert _pykernels.prune_to_giant(g.indptr, g.indices, a1) == _ckernels.prune_to_giant(g.indptr, g.indices, a2)
    assert np.array_equal(a1, a2)


@needs_ext
@settings(max_examples=60, deadline=None)
@given(weights=st.lists(st.integers(0, 50), min_size=0, max_size=60), seed=st.integers(0, 2**32 - 1))
def test_weighted_sample_kernels_agree(weights, seed):
    from cascade_grid import _ckernels

    w = np.array(weights, dtype=np.int64)
    u = np.random.default_rng(seed).random(len(w))
    assert np.array_equal(_pykernels.weighted_sample(w, u), _ckernels.weighted_sample(w, u))


def test_weighted_sample_stops_when_weight_exhausted(backend):
    picks = backend.weighted_sample(np.array([0, 3, 0, 1], dtype=np.int64), np.array([0.1, 0.9, 0.5]))
    assert sorted(picks.tolist()) == [1, 3]


def test_weighted_sample_descends_to_the_right_slot(backend):
    w = np.array([2, 1, 1], dtype=np.int64)
    # cumulative weights 2,3,4: u*4 in [0,2) -> 0, [2,3) -> 1, [3,4) -> 2
    assert backend.weighted_sample(w, np.array([0.49]))[0] == 0
    assert backend.weighted_sample(w, np.array([0.5]))[0] == 1
    assert backend.weighted_sample(w, np.array([0.99]))[0] == 2
    # after removing node 0 the remaining cumulative weights are 1,2
    assert backend.weighted_sample(w, np.array([0.0, 0.6])).tolist() == [0, 2]


def test_component_labels_ordered_by_smallest_member(backend):
    g = build_graph(6, [(4, 5), (0, 3), (1, 2)])
    labels, sizes = backend.component_labels(g.indptr, g.indices, np.ones(6, np.uint8))
    assert labels.tolist() == [0, 1, 1, 0, 2, 2]
    assert sizes.tolist() == [2, 2, 2]


def test_prune_tie_keeps_lowest_indexed_component(backend):
    g = build_graph(6, [(4, 5), (1, 3), (0, 2)])
    alive = np.ones(6, np.uint8)
    assert backend.prune_to_giant(g.indptr, g.indices, alive) == 4
    assert alive.tolist() == [1, 0, 1, 0, 0, 0]


def test_support_kernels(backend):
    sup = np.array([0, 0, 1, 1], dtype=np.int64)
    indptr = np.array([0, 2, 4, 4], dtype=np.int64)
    indices = np.array([0, 1, 2, 3], dtype=np.int64)
    comm = np.array([1, 0, 0, 0], np.uint8)
    power = np.ones(3, np.uint8)
    assert backend.fail_unsupported_power(indptr, indices, comm, power) == 2
    assert power.tolist() == [1, 0, 0]
    comm = np.ones(4, np.uint8)
    assert backend.fail_unsupported_comm(sup, power, comm) == 2
    assert comm.tolist() == [1, 1, 0, 0]
