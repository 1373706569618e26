import csv
import itertools

import numpy as np
import pytest

from cascade_grid.cascade import (
    CascadeError,
    apply_attack,
    fail_unsupported_comm,
    fail_unsupported_power,
    prune_to_giant,
    run_cascade,
    write_trace_csv,
)
from cascade_grid.graphcore import build_graph
from cascade_grid.netgen import NetworkRecipe, assign_support_links, generate_network, grid_from_assignment

from conftest import random_grid
from reference import reference_fixpoint


def small_grid():
    comm = build_graph(3, [(0, 1), (1, 2)])
    power = build_graph(2, [(0, 1)])
    return grid_from_assignment(comm, power, [0, 0, 1])


def test_apply_attack_examples():
    grid = small_grid()
    apply_attack(grid, set())
    assert grid.comm.alive_count == 3
    apply_attack(grid, {1})
    assert grid.comm.alive_count == 2
    with pytest.raises(CascadeError):
        apply_attack(grid, [1])
    apply_attack(grid, [0, 2])
    assert grid.comm.alive_count == 0
    with pytest.raises(CascadeError):
        apply_attack(small_grid(), [7])


def test_prune_connected_graph_removes_nothing(backend):
    g = build_graph(4, [(0, 1), (1, 2), (2, 3)])
    assert prune_to_giant(g).size == 0


def test_prune_keeps_bigger_component(backend):
    g = build_graph(8, [(0, 1), (1, 2), (3, 4), (4, 5), (5, 6), (6, 7)])
    assert prune_to_giant(g).tolist() == [0, 1, 2]


def test_prune_tie_break_by_enumeration(backend):
    pairs = list(itertools.combinations(range(5), 2))
    checked = 0
    for mask in range(1 << len(pairs)):
        edges = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
        g = build_graph(5, edges)
        from reference import _components, adjacency

        comps = _components(set(range(5)), adjacency(5, edges))
        top = max(len(c) for c in comps)
        winners = [c for c in comps if len(c) == top]
        prune_to_giant(g)
        kept = set(np.flatnonzero(g.alive).tolist())
        assert kept == min(winners, key=min)
        checked += len(winners) > 1
    assert checked > 0


def test_fail_unsupported_power_examples():
    comm = build_graph(11, [])
    power = build_graph(2, [])
    grid = grid_from_assignment(comm, power, [0] * 10 + [0])
    grid.comm.kill(range(1, 11))
    removed = fail_unsupported_power(grid)
    # node 0 keeps one live supporter; node 1 never had any
    assert removed.tolist() == [1]
    grid.comm.kill([0])
    assert fail_unsupported_power(grid).tolist() == [0]


def test_fail_unsupported_comm_examples():
    comm = build_graph(5, [])
    power = build_graph(2, [])
    grid = grid_from_assignment(comm, power, [0, 1, 1, 1, 0])
    assert fail_unsupported_comm(grid).size == 0
    grid.power.kill([1])
    assert fail_unsupported_comm(grid).tolist() == [1, 2, 3]


def test_no_attack_on_healthy_grid(backend):
    comm = build_graph(4, [(0, 1), (1, 2), (2, 3)])
    power = build_graph(2, [(0, 1)])
    grid = grid_from_assignment(comm, power, [0, 1, 0, 1])
    trace = run_cascade(grid, [])
    assert trace.converged
    assert trace.final_mu_A == trace.final_mu_B == 1.0
    assert [r.removed_count for r in trace.records] == [0, 0]


def test_total_attack(backend):
    grid = small_grid()
    trace = run_cascade(grid, [0, 1, 2])
    assert trace.final_mu_A == trace.final_mu_B == 0.0
    assert trace.records[1].functional_fraction == 0.0
    assert grid.comm.alive.all()  # input untouched


def test_unsupported_power_node_dies_without_attack():
    comm = build_graph(3, [(0, 1), (1, 2)])
    power = build_graph(3, [(0, 1), (1, 2)])
    grid = grid_from_assignment(comm, power, [0, 0, 1])
    trace = run_cascade(grid, [])
    assert trace.records[1].removed_count == 1
    assert not trace.power_alive[2]
    assert trace.final_mu_A == 1.0


def test_chain_failure():
    comm = build_graph(4, [(0, 1), (1, 2), (2, 3)])
    power = build_graph(2, [(0, 1)])
    grid = grid_from_assignment(comm, power, [0, 0, 1, 1])
    trace = run_cascade(grid, [3])
    # power 1 keeps supporter 2, so nothing beyond the attack fails
    assert trace.final_mu_A == 0.75
    trace = run_cascade(grid, [2, 3])
    assert not trace.power_alive[1]
    assert trace.final_mu_A == 0.5


def test_trace_stage_layout():
    rng = np.random.default_rng(4)
    grid = random_grid(rng, 30, 8, p_a=0.08, p_b=0.3)
    trace = run_cascade(grid, [0, 1, 2, 3])
    assert [r.stage for r in trace.records] == list(range(1, trace.stages + 1))
    assert all(r.side == ("comm" if r.stage % 2 else "power") for r in trace.records)
    for r in trace.records:
        assert 0 <= r.functional_fraction <= 1
        assert r.giant_size <= r.alive_count


def check_trace_invariants(grid, trace):
    n_a, n_b = grid.comm.node_count, grid.power.node_count
    assert trace.converged
    assert trace.stages <= n_a + n_b + 2
    for side in ("comm", "power"):
        mus = [r.functional_fraction for r in trace.side(side)]
        assert all(a >= b for a, b in zip(mus, mus[1:]))
    last = trace.side(trace.records[-1].side)
    if len(last) > 1:
        assert last[-1].functional_fraction == last[-2].functional_fraction
    # fixpoint soundness
    comm, power = trace.comm_alive, trace.power_alive
    for b in np.flatnonzero(power):
        assert comm[grid.supporters_of_power(b)].any()
    for a in np.flatnonzero(comm):
        assert power[grid.support_of_comm[a]]
    for g, alive in ((grid.comm, comm), (grid.power, power)):
        h = g.copy()
        h.alive[:] = alive
        assert prune_to_giant(h).size == 0


def test_invariants_on_generated_grids(backend):
    grid = assign_support_links(
        generate_network(NetworkRecipe("sf", 2000, seed=1)), generate_network(NetworkRecipe("sf", 1000, seed=2)), 3
    )
    rng = np.random.default_rng(0)
    for x in (0, 200, 600, 1200, 2000):
        trace = run_cascade(grid, rng.choice(2000, x, replace=False))
        check_trace_invariants(grid, trace)


def test_matches_reference_on_small_grids(backend):
    for inst in range(25):
        rng = np.random.default_rng(1000 + inst)
        n_a, n_b = int(rng.integers(1, 8)), int(rng.integers(1, 5))
        grid = random_grid(rng, n_a, n_b, p_a=rng.uniform(0.1, 0.7), p_b=rng.uniform(0.1, 0.9))
        for r in range(n_a + 1):
            for attacked in itertools.combinations(range(n_a), r):
                trace = run_cascade(grid, list(attacked))
                check_trace_invariants(grid, trace)
                comm, power = reference_fixpoint(
                    n_a, n_b, grid.comm.edges.tolist(), grid.power.edges.tolist(),
                    grid.support_of_comm.tolist(), attacked,
                )
                assert set(np.flatnonzero(trace.comm_alive).tolist()) == comm
                assert set(np.flatnonzero(trace.power_alive).tolist()) == power


def test_larger_attack_can_raise_final_mu():
    # Pruning to the single largest component is not monotone in the attack
    # set: here attacking comm node 4 changes which isolated power node wins
    # the size tie, and more comm nodes survive.
    comm = build_graph(7, [(0, 1), (1, 4), (1, 6), (2, 4), (3, 6), (4, 5)])
    power = build_graph(3, [])
    grid = grid_from_assignment(comm, power, [2, 2, 1, 2, 2, 1, 2])
    assert run_cascade(grid, []).final_mu_A == pytest.approx(1 / 7)
    assert run_cascade(grid, [4]).final_mu_A == pytest.approx(4 / 7)


def test_preprune_settles_first():
    comm = build_graph(3, [(0, 1), (1, 2)])
    power = build_graph(3, [(0, 1), (1, 2)])
    grid = grid_from_assignment(comm, power, [0, 0, 1])
    trace = run_cascade(grid, [], preprune=True)
    assert trace.final_mu_B == pytest.approx(2 / 3)
    assert all(r.removed_count == 0 for r in trace.records)


def test_deterministic_and_backend_independent():
    from cascade_grid import _backend

    grid = assign_support_links(
        generate_network(NetworkRecipe("sf", 1500, seed=5)), generate_network(NetworkRecipe("er", 500, p=0.01, seed=6)), 7
    )
    attacked = np.random.default_rng(1).choice(1500, 300, replace=False)
    traces = []
    for name in _backend.available_backends():
        with _backend.use_backend(name):
            traces.append(run_cascade(grid, attacked))
            traces.append(run_cascade(grid, attacked))
    assert all(t.records == traces[0].records for t in traces)


def test_trace_csv(tmp_path):
    trace = run_cascade(small_grid(), [1])
    path = tmp_path / "trace.csv"
    write_trace_csv(trace, path)
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["stage", "side", "removed_count", "alive_count", "giant_size", "mu"]
    assert len(rows) == 1 + trace.stages
    assert float(rows[1][5]) == trace.records[0].functional_fraction
