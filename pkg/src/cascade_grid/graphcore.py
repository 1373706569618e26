"""Undirected graph storage and connected components over alive nodes.

Graphs are stored as CSR adjacency (``indptr``/``indices``) plus an
edge array. Node removal only flips an alive mask, so the original
topology and node count stay available for reporting.
"""

from dataclasses import dataclass

import numpy as np

from . import _backend
from .distribution import DegreeDistribution


class GraphError(ValueError):
    pass


@dataclass(eq=False)
class Graph:
    """Undirected simple graph with a per-node alive mask.

    ``edges`` is an ``(m, 2)`` array with ``u < v`` per row, sorted
    lexicographically. ``indptr``/``indices`` hold the symmetric
    adjacency with sorted neighbor lists. Only ``alive`` ever changes.
    """

    node_count: int
    edges: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    alive: np.ndarray

    @property
    def edge_count(self):
        return len(self.edges)

    @property
    def alive_count(self):
        return int(np.count_nonzero(self.alive))

    def degrees(self):
        """Degrees in the original topology, ignoring the alive mask."""
        return np.diff(self.indptr)

    def alive_degrees(self):
        """Degrees counting only edges between alive nodes (0 for dead nodes)."""
        return _backend.kernels.alive_degrees(self.indptr, self.indices, self.alive_view())

    def neighbors(self, v):
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def alive_view(self):
        return self.alive.view(np.uint8)

    def alive_nodes(self):
        return np.flatnonzero(self.alive)

    def kill(self, nodes):
        self.alive[np.asarray(nodes, dtype=np.int64)] = False

    def copy(self):
        """Copy sharing the immutable topology, with an independent alive mask."""
        return Graph(self.node_count, self.edges, self.indptr, self.indices, self.alive.copy())

    def reset(self):
        self.alive[:] = True


@dataclass
class ComponentLabeling:
    """Connected components of the alive subgraph.

    ``component_id[v]`` is -1 for dead nodes. Labels are ordered by the
    smallest node index they contain, so label ``largest_label`` is the
    lowest-indexed among equally large components.
    """

    component_id: np.ndarray
    component_sizes: np.ndarray
    largest_size: int
    largest_label: int

    @property
    def count(self):
        return len(self.component_sizes)

    def members(self, label):
        return np.flatnonzero(self.component_id == label)

    def giant_members(self):
        if self.largest_label < 0:
            return np.empty(0, dtype=np.int64)
        return self.members(self.largest_label)


def build_graph(node_count, edges):
    """Build a graph with every node alive.

    Raises :class:`GraphError` on out-of-range endpoints, self-loops or
    duplicate edges (in either orientation).
    """
    if node_count < 0:
        raise GraphError("node_count must be non-negative")
    e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if e.size:
        if e.min() < 0 or e.max() >= node_count:
            raise GraphError(f"edge endpoint out of range [0, {node_count})")
        loops = e[:, 0] == e[:, 1]
        if loops.any():
            raise GraphError(f"self-loop at node {int(e[loops][0, 0])}")
    e = np.sort(e, axis=1)
    order = np.lexsort((e[:, 1], e[:, 0]))
    e = e[order]
    if len(e) > 1:
        dup = np.all(e[1:] == e[:-1], axis=1)
        if dup.any():
            u, v = e[1:][dup][0]
            raise GraphError(f"duplicate edge ({int(u)}, {int(v)})")
    return _from_sorted_edges(node_count, e)


def _from_sorted_edges(node_count, e):
    src = np.concatenate([e[:, 0], e[:, 1]])
    dst = np.concatenate([e[:, 1], e[:, 0]])
    order = np.lexsort((dst, src))
    indices = np.ascontiguousarray(dst[order], dtype=np.int64)
    counts = np.bincount(src, minlength=node_count)
    indptr = np.zeros(node_count + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    e = np.ascontiguousarray(e, dtype=np.int64)
    e.setflags(write=False)
    indptr.setflags(write=False)
    indices.setflags(write=False)
    return Graph(node_count, e, indptr, indices, np.ones(node_count, dtype=bool))


def largest_component(g):
    labels, sizes = _backend.kernels.component_labels(g.indptr, g.indices, g.alive_view())
    if len(sizes) == 0:
        return ComponentLabeling(labels, sizes, 0, -1)
    best = int(np.argmax(sizes))
    return ComponentLabeling(labels, sizes, int(sizes[best]), best)


def giant_fraction(g, base_count):
    """Largest alive component size over ``base_count`` (the original size)."""
    if base_count <= 0:
        raise GraphError("base_count must be positive")
    return largest_component(g).largest_size / base_count


def giant_members(g, threshold=0.0):
    """Nodes of the giant component, or none if it has fewer than ``threshold * n`` nodes."""
    lab = largest_component(g)
    if lab.largest_size == 0 or lab.largest_size < threshold * g.node_count:
        return np.empty(0, dtype=np.int64)
    return lab.giant_members()


def degree_distribution(g):
    """Empirical degree distribution over alive nodes (alive-alive edges only)."""
    if g.alive_count == 0:
        raise GraphError("no alive nodes")
    return DegreeDistribution.from_samples(g.alive_degrees()[g.alive])


def read_edgelist(path):
    """Parse the ``n <count>`` + ``u v`` per line edge-list format."""
    node_count = None
    edges = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if node_count is None:
                if len(parts) != 2 or parts[0] != "n":
                    raise GraphError(f"{path}:{lineno}: expected header 'n <node_count>'")
                node_count = int(parts[1])
                continue
            if len(parts) != 2:
                raise GraphError(f"{path}:{lineno}: expected 'u v'")
            edges.append((int(parts[0]), int(parts[1])))
    if node_count is None:
        raise GraphError(f"{path}: missing 'n <node_count>' header")
    try:
        return build_graph(node_count, edges)
    except GraphError as exc:
        raise GraphError(f"{path}: {exc}") from None


def write_edgelist(g, path):
    with open(path, "w") as fh:
        fh.write(f"n {g.node_count}\n")
        for u, v in g.edges.tolist():
            fh.write(f"{u} {v}\n")
