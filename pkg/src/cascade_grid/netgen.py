"""Network generators and the interdependent power/communication grid."""

import math
import os
from dataclasses import asdict, dataclass

import numpy as np

from .distribution import DegreeDistribution
from .graphcore import _from_sorted_edges, build_graph, read_edgelist, write_edgelist

SCALE_FREE = "scale_free"
ERDOS_RENYI = "erdos_renyi"
_KIND_ALIASES = {"sf": SCALE_FREE, "scale_free": SCALE_FREE, "er": ERDOS_RENYI, "erdos_renyi": ERDOS_RENYI}

DEFAULT_ALPHA = 2.5
DEFAULT_MIN_DEGREE = 2
MAX_PARITY_RESAMPLES = 10_000
MAX_REWIRE_ATTEMPTS = 1_000


class GenerationError(RuntimeError):
    pass


@dataclass
class NetworkRecipe:
    """Parameters for one generated network.

    Scale-free recipes take ``alpha`` and ``min_degree`` (filled with
    defaults when omitted) and an optional ``method``, either
    ``"configuration"`` or ``"barabasi_albert"``. Erdős–Rényi recipes take
    only ``p``.
    """

    kind: str
    node_count: int
    alpha: float | None = None
    min_degree: int | None = None
    p: float | None = None
    seed: int = 0
    method: str | None = None

    def __post_init__(self):
        kind = _KIND_ALIASES.get(str(self.kind).lower())
        if kind is None:
            raise ValueError(f"unknown network kind {self.kind!r}")
        self.kind = kind
        if self.node_count < 1:
            raise ValueError("node_count must be >= 1")
        if kind == SCALE_FREE:
            if self.p is not None:
                raise ValueError("p is only valid for erdos_renyi recipes")
            self.method = self.method or "configuration"
            if self.method not in ("configuration", "barabasi_albert"):
                raise ValueError(f"unknown scale-free method {self.method!r}")
            if self.alpha is None:
                self.alpha = DEFAULT_ALPHA
            if self.min_degree is None:
                self.min_degree = DEFAULT_MIN_DEGREE
            if self.alpha <= 1:
                raise ValueError("alpha must exceed 1")
            if self.min_degree < 1:
                raise ValueError("min_degree must be >= 1")
        else:
            if self.alpha is not None or self.min_degree is not None or self.method is not None:
                raise ValueError("alpha/min_degree/method are only valid for scale_free recipes")
            if self.p is None or not 0 <= self.p <= 1:
                raise ValueError("erdos_renyi recipes need p in [0, 1]")

    @classmethod
    def from_json(cls, obj):
        """Build from config keys ``{kind, n, alpha, min_degree, p, seed, method}``."""
        known = {"kind", "n", "node_count", "alpha", "min_degree", "p", "seed", "method"}
        extra = set(obj) - known
        if extra:
            raise ValueError(f"unknown recipe keys: {sorted(extra)}")
        n = obj.get("n", obj.get("node_count"))
        if n is None:
            raise ValueError("recipe needs 'n'")
        return cls(
            kind=obj["kind"],
            node_count=int(n),
            alpha=obj.get("alpha"),
            min_degree=obj.get("min_degree"),
            p=obj.get("p"),
            seed=int(obj.get("seed", 0)),
            method=obj.get("method"),
        )

    def to_json(self):
        d = {k: v for k, v in asdict(self).items() if v is not None}
        d["n"] = d.pop("node_count")
        return d


@dataclass(eq=False)
class InterdependentGrid:
    """Communication network, power network and the support links between them.

    Every comm node has exactly one power supporter
    (``support_of_comm[a]``). The comm nodes supporting power node ``b``
    are ``sup_indices[sup_indptr[b]:sup_indptr[b + 1]]``.
    """

    comm: object
    power: object
    support_of_comm: np.ndarray
    sup_indptr: np.ndarray
    sup_indices: np.ndarray

    def supporters_of_power(self, b):
        return self.sup_indices[self.sup_indptr[b] : self.sup_indptr[b + 1]]

    def support_counts(self):
        return np.diff(self.sup_indptr)

    def copy(self):
        return InterdependentGrid(
            self.comm.copy(), self.power.copy(), self.support_of_comm, self.sup_indptr, self.sup_indices
        )

    def check_consistency(self):
        """Full scan of the support maps; raises AssertionError on mismatch."""
        n_a, n_b = self.comm.node_count, self.power.node_count
        assert len(self.support_of_comm) == n_a
        assert len(self.sup_indptr) == n_b + 1
        assert self.sup_indptr[-1] == n_a
        for b in range(n_b):
            for a in self.supporters_of_power(b).tolist():
                assert self.support_of_comm[a] == b, (a, b)
        assert sorted(self.sup_indices.tolist()) == list(range(n_a))


def _powerlaw_degrees(rng, n, alpha, kmin, kmax):
    ks = np.arange(kmin, kmax + 1)
    probs = ks.astype(float) ** -alpha
    probs /= probs.sum()
    deg = rng.choice(ks, size=n, p=probs)
    for _ in range(MAX_PARITY_RESAMPLES):
        if deg.sum() % 2 == 0:
            return deg
        deg[rng.integers(n)] = rng.choice(ks, p=probs)
    raise GenerationError("could not reach an even degree sum")


def _configuration_edges(rng, deg):
    """Stub matching with degree-preserving repair of loops and multi-edges.

    Bad pairs from the random matching are fixed by swapping with a random
    good edge: ``(a, b) + (c, d) -> (a, c) + (b, d)``. This keeps every
    node's degree exactly as sampled.
    """
    stubs = np.repeat(np.arange(len(deg), dtype=np.int64), deg)
    rng.shuffle(stubs)
    pairs = np.sort(stubs.reshape(-1, 2), axis=1)

    edge_list = []
    edge_set = set()
    bad = []
    for u, v in pairs.tolist():
        if u == v or (u, v) in edge_set:
            bad.append((u, v))
        else:
            edge_set.add((u, v))
            edge_list.append((u, v))

    for a, b in bad:
        for _ in range(MAX_REWIRE_ATTEMPTS if edge_list else 0):
            idx = int(rng.integers(len(edge_list)))
            c, d = edge_list[idx]
            if rng.random() < 0.5:
                c, d = d, c
            e1 = (min(a, c), max(a, c))
            e2 = (min(b, d), max(b, d))
            if a == c or b == d or e1 == e2 or e1 in edge_set or e2 in edge_set:
                continue
            edge_set.discard(edge_list[idx])
            edge_list[idx] = e1
            edge_list.append(e2)
            edge_set.add(e1)
            edge_set.add(e2)
            break
        else:
            raise GenerationError("degree sequence could not be realized as a simple graph")
    return edge_list


def _scale_free(recipe, rng):
    n = recipe.node_count
    if recipe.method == "barabasi_albert":
        return _barabasi_albert(n, recipe.min_degree, rng)
    kmax = max(math.isqrt(n), recipe.min_degree)
    if kmax >= n:
        raise GenerationError(f"min_degree {recipe.min_degree} too large for {n} nodes")
    deg = _powerlaw_degrees(rng, n, recipe.alpha, recipe.min_degree, kmax)
    edges = _configuration_edges(rng, deg)
    return build_graph(n, edges)


def _barabasi_albert(n, m, rng):
    if n <= m:
        raise GenerationError("barabasi_albert needs more nodes than min_degree")
    edges = []
    # endpoint multiset: a node appears once per incident edge
    targets = []
    for v in range(m + 1):
        for u in range(v):
            edges.append((u, v))
            targets += [u, v]
    for v in range(m + 1, n):
        chosen = set()
        while len(chosen) < m:
            chosen.add(targets[int(rng.integers(len(targets)))])
        for u in sorted(chosen):
            edges.append((u, v))
            targets += [u, v]
    return build_graph(n, edges)


def _erdos_renyi(recipe, rng):
    """G(n, p) via a binomial edge count and a uniform subset of pair slots.

    This draws each of the ``n(n-1)/2`` pair indicators i.i.d. Bernoulli(p).
    """
    n, p = recipe.node_count, recipe.p
    pairs = n * (n - 1) // 2
    m = int(rng.binomial(pairs, p)) if pairs else 0
    if m == 0:
        return build_graph(n, [])
    slots = np.sort(rng.choice(pairs, size=m, replace=False).astype(np.int64))
    u, v = _unrank_pairs(slots, n)
    return _from_sorted_edges(n, np.column_stack([u, v]))


def _unrank_pairs(t, n):
    """Map lexicographic ranks of pairs ``(i, j), i < j`` back to the pairs."""
    # row i starts at i*n - i*(i+1)/2
    b = 2 * n - 1
    i = np.floor((b - np.sqrt(b * b - 8.0 * t)) / 2).astype(np.int64)
    i = np.clip(i, 0, n - 2)

    def start(r):
        return r * n - r * (r + 1) // 2

    for _ in range(3):
        i = np.where(start(i) > t, i - 1, i)
        i = np.where(start(i + 1) <= t, i + 1, i)
    j = t - start(i) + i + 1
    return i, j


def generate_network(recipe):
    """Generate the network described by ``recipe``; deterministic in its seed."""
    rng = np.random.default_rng(recipe.seed)
    if recipe.kind == SCALE_FREE:
        return _scale_free(recipe, rng)
    return _erdos_renyi(recipe, rng)


def grid_from_assignment(comm, power, support_of_comm):
    """Wrap a given comm-to-power support assignment as a grid."""
    sup = np.ascontiguousarray(support_of_comm, dtype=np.int64)
    if len(sup) != comm.node_count:
        raise ValueError("need one supporter per comm node")
    if len(sup) and (sup.min() < 0 or sup.max() >= power.node_count):
        raise ValueError("supporter index out of range")
    order = np.argsort(sup, kind="stable").astype(np.int64)
    indptr = np.zeros(power.node_count + 1, dtype=np.int64)
    np.cumsum(np.bincount(sup, minlength=power.node_count), out=indptr[1:])
    for arr in (sup, order, indptr):
        arr.setflags(write=False)
    return InterdependentGrid(comm, power, sup, indptr, order)


def assign_support_links(comm, power, seed):
    """Give each comm node one power supporter chosen uniformly and independently."""
    if comm.node_count == 0 or power.node_count == 0:
        raise ValueError("both networks must be non-empty")
    rng = np.random.default_rng(seed)
    return grid_from_assignment(comm, power, rng.integers(0, power.node_count, size=comm.node_count))


def support_degree_distribution(grid):
    """Distribution of the number of comm supporters per power node."""
    return DegreeDistribution.from_samples(grid.support_counts())


def build_grid(comm_recipe, power_recipe, support_seed):
    comm = generate_network(comm_recipe)
    power = generate_network(power_recipe)
    return assign_support_links(comm, power, support_seed)


def save_grid(grid, directory):
    """Write ``comm.edges``, ``power.edges`` and ``interlinks.txt`` into ``directory``."""
    os.makedirs(directory, exist_ok=True)
    write_edgelist(grid.comm, os.path.join(directory, "comm.edges"))
    write_edgelist(grid.power, os.path.join(directory, "power.edges"))
    with open(os.path.join(directory, "interlinks.txt"), "w") as fh:
        fh.write("# a b: comm node a supported by power node b\n")
        for a, b in enumerate(grid.support_of_comm.tolist()):
            fh.write(f"{a} {b}\n")


def load_grid(directory):
    comm = read_edgelist(os.path.join(directory, "comm.edges"))
    power = read_edgelist(os.path.join(directory, "power.edges"))
    sup = np.full(comm.node_count, -1, dtype=np.int64)
    path = os.path.join(directory, "interlinks.txt")
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            a, b = (int(t) for t in line.split())
            if not 0 <= a < comm.node_count:
                raise ValueError(f"{path}:{lineno}: comm node {a} out of range")
            if sup[a] >= 0:
                raise ValueError(f"{path}:{lineno}: comm node {a} has two supporters")
            sup[a] = b
    missing = np.flatnonzero(sup < 0)
    if missing.size:
        raise ValueError(f"{path}: comm node {int(missing[0])} has no supporter")
    return grid_from_assignment(comm, power, sup)
