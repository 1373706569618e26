"""Staged failure propagation between the communication and power networks.

Odd stages act on the communication network, even stages on the power
network. Stage 1 applies the attack; every later stage applies the
support rule for its side. Each stage then prunes its side to the
largest alive component.
"""

import csv
from dataclasses import dataclass, field

import numpy as np

from . import _backend

COMM = "comm"
POWER = "power"


class CascadeError(ValueError):
    pass


@dataclass(frozen=True)
class StageRecord:
    stage: int
    side: str
    removed_count: int
    removed_fraction: float
    functional_fraction: float
    alive_count: int
    giant_size: int


@dataclass
class CascadeTrace:
    records: list = field(default_factory=list)
    converged: bool = False
    final_mu_A: float = 1.0
    final_mu_B: float = 1.0
    comm_alive: np.ndarray | None = None
    power_alive: np.ndarray | None = None

    @property
    def stages(self):
        return len(self.records)

    def side(self, side):
        return [r for r in self.records if r.side == side]


def apply_attack(grid, attacked):
    """Kill the attacked comm nodes in place and return the grid."""
    nodes = np.unique(np.asarray(list(attacked) if isinstance(attacked, (set, frozenset)) else attacked,
                                 dtype=np.int64))
    if nodes.size:
        if nodes[0] < 0 or nodes[-1] >= grid.comm.node_count:
            raise CascadeError("attacked node index out of range")
        if not grid.comm.alive[nodes].all():
            dead = nodes[~grid.comm.alive[nodes]]
            raise CascadeError(f"comm node {int(dead[0])} is already dead")
        grid.comm.alive[nodes] = False
    return grid


def _removed_between(before, after):
    return np.flatnonzero(before & ~after)


def prune_to_giant(g):
    """Kill alive nodes outside the largest component; return the removed nodes."""
    before = g.alive.copy()
    _backend.kernels.prune_to_giant(g.indptr, g.indices, g.alive_view())
    return _removed_between(before, g.alive)


def fail_unsupported_power(grid):
    """Kill alive power nodes with no alive comm supporter; return them."""
    before = grid.power.alive.copy()
    _backend.kernels.fail_unsupported_power(
        grid.sup_indptr, grid.sup_indices, grid.comm.alive_view(), grid.power.alive_view()
    )
    return _removed_between(before, grid.power.alive)


def fail_unsupported_comm(grid):
    """Kill alive comm nodes whose power supporter is dead; return them."""
    before = grid.comm.alive.copy()
    _backend.kernels.fail_unsupported_comm(grid.support_of_comm, grid.power.alive_view(), grid.comm.alive_view())
    return _removed_between(before, grid.comm.alive)


def _comm_step(grid, k, attacked=None):
    g = grid.comm
    alive_before = int(np.count_nonzero(g.alive))
    if attacked is None:
        k.fail_unsupported_comm(grid.support_of_comm, grid.power.alive_view(), g.alive_view())
    else:
        apply_attack(grid, attacked)
    k.prune_to_giant(g.indptr, g.indices, g.alive_view())
    return alive_before - int(np.count_nonzero(g.alive))


def _power_step(grid, k):
    g = grid.power
    alive_before = int(np.count_nonzero(g.alive))
    k.fail_unsupported_power(grid.sup_indptr, grid.sup_indices, grid.comm.alive_view(), g.alive_view())
    k.prune_to_giant(g.indptr, g.indices, g.alive_view())
    return alive_before - int(np.count_nonzero(g.alive))


def _record(stage, side, g, removed):
    alive = int(np.count_nonzero(g.alive))
    n = g.node_count
    # after pruning the alive set is a single component
    return StageRecord(
        stage=stage,
        side=side,
        removed_count=removed,
        removed_fraction=removed / n if n else 0.0,
        functional_fraction=alive / n if n else 0.0,
        alive_count=alive,
        giant_size=alive,
    )


def stabilize(grid):
    """Run the cascade with no attack, in place. Returns the trace."""
    return run_cascade(grid, (), copy=False)


def run_cascade(grid, attacked, *, copy=True, preprune=False, max_stages=None):
    """Propagate failures from ``attacked`` comm nodes to a fixpoint.

    Stops at the first stage after stage 1 that removes nothing; from that
    point neither side can change. With ``copy=True`` (default) the input
    grid is left untouched. ``preprune`` first settles the unattacked grid.
    """
    if copy:
        grid = grid.copy()
    if preprune:
        stabilize(grid)
    k = _backend.kernels
    n_a, n_b = grid.comm.node_count, grid.power.node_count
    limit = max_stages if max_stages is not None else n_a + n_b + 2

    trace = CascadeTrace()
    removed = _comm_step(grid, k, attacked)
    trace.records.append(_record(1, COMM, grid.comm, removed))
    stage = 1
    while stage < limit:
        stage += 1
        if stage % 2 == 0:
            removed = _power_step(grid, k)
            trace.records.append(_record(stage, POWER, grid.power, removed))
        else:
            removed = _comm_step(grid, k)
            trace.records.append(_record(stage, COMM, grid.comm, removed))
        if removed == 0:
            trace.converged = True
            break

    trace.final_mu_A = grid.comm.alive_count / n_a if n_a else 0.0
    trace.final_mu_B = grid.power.alive_count / n_b if n_b else 0.0
    trace.comm_alive = grid.comm.alive.copy()
    trace.power_alive = grid.power.alive.copy()
    return trace


TRACE_COLUMNS = ["stage", "side", "removed_count", "alive_count", "giant_size", "mu"]


def write_trace_csv(trace, path):
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(TRACE_COLUMNS)
            for r in trace.records:
                writer.writerow([r.stage, r.side, r.removed_count, r.alive_count, r.giant_size,
                                 repr(r.functional_fraction)])
    except OSError as exc:
        raise OSError(f"cannot write trace to {path}: {exc}") from exc
