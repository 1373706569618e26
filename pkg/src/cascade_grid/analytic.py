"""Generating-function percolation analysis for the interdependent grid.

Covers three calculations:

* giant component after random removal, ``mu = phi * (1 - g0(u))`` with
  ``u = 1 - phi + phi * g1(u)``;
* giant component after a targeted attack with per-degree survival
  ``phi_k``, ``mu = f0(1) - f0(u)`` with ``u = 1 - f1(1) + f1(u)``;
* the alternating comm/power stage recursion iterated to steady state.

Generating functions are finite sums over the pmf support, so no series
truncation is involved.
"""

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import brentq

from .distribution import DegreeDistribution

FIXED_POINT_TOL = 1e-12
FIXED_POINT_MAX_ITER = 10**6
# plain iteration is linear and crawls near the threshold; hand over to a
# bracketed root solve after this many steps
BRACKET_AFTER = 2_000
STEADY_TOL = 1e-10
MAX_STAGES = 10**4


class NumericalError(ArithmeticError):
    """Raised when an iteration fails to converge; carries the last iterate."""

    def __init__(self, message, last=None, iterations=None):
        super().__init__(message)
        self.last = last
        self.iterations = iterations


def _excess_coeffs(pmf, weights=None):
    """Coefficients of ``sum_k (k+1) P(k+1) w(k+1) z^k / <k>``."""
    k = np.arange(pmf.size)
    mean = float(np.dot(k, pmf))
    if mean == 0:
        return np.array([1.0]) if weights is None else np.array([0.0])
    w = pmf if weights is None else pmf * weights
    return (k * w)[1:] / mean if pmf.size > 1 else np.array([0.0])


@dataclass(frozen=True, eq=False)
class GenFnSet:
    """Degree and excess-degree generating functions of one network.

    With a survival profile ``phi`` (``phi[k]`` = probability a degree-k
    node is not attacked) the attacked variants ``f0``/``f1`` are
    available as well.
    """

    dist: DegreeDistribution
    phi: np.ndarray | None = None
    _g1c: np.ndarray = field(init=False, repr=False)
    _f0c: np.ndarray | None = field(init=False, repr=False)
    _f1c: np.ndarray | None = field(init=False, repr=False)

    def __post_init__(self):
        pmf = self.dist.pmf
        object.__setattr__(self, "_g1c", _excess_coeffs(pmf))
        if self.phi is None:
            object.__setattr__(self, "_f0c", None)
            object.__setattr__(self, "_f1c", None)
            return
        phi = np.asarray(self.phi, dtype=float)
        if phi.ndim == 0:
            phi = np.full(pmf.size, float(phi))
        if phi.size < pmf.size:
            raise ValueError(f"phi profile covers degrees < {phi.size}, need < {pmf.size}")
        phi = phi[: pmf.size].copy()
        if np.any(phi < 0) or np.any(phi > 1):
            raise ValueError("phi_k must lie in [0, 1]")
        phi.setflags(write=False)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "_f0c", pmf * phi)
        object.__setattr__(self, "_f1c", _excess_coeffs(pmf, phi))

    def with_phi(self, phi):
        return GenFnSet(self.dist, phi)

    def _require_phi(self):
        if self._f0c is None:
            raise ValueError("this GenFnSet has no phi profile")

    def g0(self, z):
        return P.polyval(z, self.dist.pmf)

    def g1(self, z):
        return P.polyval(z, self._g1c)

    def g0_prime(self, z):
        return P.polyval(z, P.polyder(self.dist.pmf)) if self.dist.pmf.size > 1 else 0.0 * np.asarray(z)

    def f0(self, z):
        self._require_phi()
        return P.polyval(z, self._f0c)

    def f1(self, z):
        self._require_phi()
        return P.polyval(z, self._f1c)

    def f0_prime(self, z):
        self._require_phi()
        return P.polyval(z, P.polyder(self._f0c)) if self._f0c.size > 1 else 0.0 * np.asarray(z)

    @property
    def g1_coeffs(self):
        return self._g1c

    @property
    def f1_coeffs(self):
        self._require_phi()
        return self._f1c


def smallest_fixed_point(coeffs, tol=FIXED_POINT_TOL, max_iter=FIXED_POINT_MAX_ITER):
    """Smallest root in ``[0, 1]`` of ``u = h(u)``, ``h(u) = sum_k coeffs[k] u**k``.

    ``h`` has non-negative coefficients with ``h(1) = 1``, so ``u = 1`` is
    always a root and iterating ``u <- h(u)`` from 0 climbs monotonically
    to the smallest one. When ``h'(1) <= 1`` there is nothing below 1.
    """
    c = np.asarray(coeffs, dtype=float)
    dc = P.polyder(c) if c.size > 1 else np.array([0.0])
    if P.polyval(1.0, dc) <= 1.0 + 1e-12:
        return 1.0

    u = 0.0
    limit = min(max_iter, BRACKET_AFTER)
    for _ in range(limit):
        nxt = float(P.polyval(u, c))
        if abs(nxt - u) < tol:
            return nxt
        u = nxt
    if limit == max_iter:
        raise NumericalError("fixed-point iteration did not converge", last=u, iterations=max_iter)

    # F(u) = h(u) - u is convex with F(1) = 0 and F'(1) > 0; its minimum b
    # satisfies h'(b) = 1 and F(b) < 0, so [u, b] brackets the smallest root.
    b = brentq(lambda t: P.polyval(t, dc) - 1.0, u, 1.0, xtol=1e-15)
    root = brentq(lambda t: P.polyval(t, c) - t, u, b, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    if abs(P.polyval(root, c) - root) > 1e-10:
        raise NumericalError("bracketed fixed-point solve failed", last=root, iterations=limit)
    return float(root)


def _check_fraction(name, value):
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")


def solve_u(genfns, phi):
    """Probability of not reaching the giant component along a random edge
    when each node survives independently with probability ``phi``."""
    _check_fraction("phi", phi)
    c = phi * genfns.g1_coeffs
    c[0] += 1.0 - phi
    return smallest_fixed_point(c)


def giant_random_removal(genfns, phi):
    u = solve_u(genfns, phi)
    return float(phi * (1.0 - genfns.g0(u)))


def targeted_stage1(genfns):
    """Giant fraction after an attack described by ``genfns.phi``.

    Returns ``(mu, u)``.
    """
    c = genfns.f1_coeffs.copy()
    c[0] += 1.0 - float(genfns.f1(1.0))
    u = smallest_fixed_point(c)
    mu = float(genfns.f0(1.0) - genfns.f0(u))
    return max(mu, 0.0), u


def support_fail_fraction(support_pmf, mu_other):
    """Fraction of nodes whose supporters all sit outside the other side's giant component."""
    _check_fraction("mu_other", mu_other)
    r = float(P.polyval(1.0 - mu_other, support_pmf.pmf))
    return min(max(r, 0.0), 1.0)  # pmf sums to 1 only up to rounding


def percolation_threshold(genfns, tol=1e-6):
    """Bisect for the smallest surviving fraction that still leaves a giant component."""
    if giant_random_removal(genfns, 1.0) <= 0.0:
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if giant_random_removal(genfns, mid) > 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


# --- attack profiles ---------------------------------------------------------

def targeted_profile(dist, attack_size, edge_count):
    """``phi_k = 1 - x k / (2 m)``, clipped to ``[0, 1]``."""
    k = np.arange(dist.pmf.size)
    if edge_count == 0:
        return np.ones(k.size)
    return np.clip(1.0 - attack_size * k / (2.0 * edge_count), 0.0, 1.0)


def successive_profile(dist, attack_size, node_count):
    """``phi_k = exp(-theta k)`` with ``theta`` matching the expected attack size.

    Large-n inclusion probabilities of successive degree-weighted sampling.
    Zero-degree nodes are never hit while any positive-degree node remains.
    """
    pmf = dist.pmf
    k = np.arange(pmf.size)
    positive = node_count * (1.0 - pmf[0])
    if attack_size <= 0:
        return np.ones(k.size)
    if attack_size >= positive:
        phi = np.zeros(k.size)
        if pmf[0] > 0:
            phi[0] = max(0.0, 1.0 - (attack_size - positive) / (node_count * pmf[0]))
        return phi

    def excess(theta):
        return node_count * float(np.dot(pmf, 1.0 - np.exp(-theta * k))) - attack_size

    hi = 1.0
    while excess(hi) < 0:
        hi *= 2.0
    theta = brentq(excess, 0.0, hi, xtol=1e-14)
    return np.exp(-theta * k)


def random_profile(dist, attack_size, node_count):
    return np.full(dist.pmf.size, max(0.0, 1.0 - attack_size / node_count))


# --- stage recursion -----------------------------------------------------------

@dataclass(frozen=True)
class StagePrediction:
    stage: int
    side: str
    mu: float
    removed_fraction: float


@dataclass
class CascadePrediction:
    stages: list
    steady_mu_A: float
    steady_mu_B: float
    iterations: int
    converged: bool = True

    def side(self, side):
        return [s for s in self.stages if s.side == side]


def stage_recursion(genfns_A, genfns_B, support_pmf_B, tol=STEADY_TOL, max_stages=MAX_STAGES):
    """Alternate comm (odd) and power (even) stage equations until steady.

    ``genfns_A.phi`` is the attack survival profile on the comm side.
    Odd stage ``2n+1`` removes ``r = 1 - mu_B(2n)`` of the comm nodes on
    top of the attack, i.e. survival ``phi_k (1 - r)``. Even stage ``2n``
    removes ``r_B = sum_k Ps(k) (1 - mu_A(2n-1))**k`` of the power nodes
    at random. Stops when consecutive same-side values differ by less
    than ``tol`` on both sides.
    """
    base_phi = genfns_A.phi
    if base_phi is None:
        base_phi = np.ones(genfns_A.dist.pmf.size)
        genfns_A = genfns_A.with_phi(base_phi)

    mu_a, _ = targeted_stage1(genfns_A)
    stages = [StagePrediction(1, "comm", mu_a, 0.0)]
    mu_b = None
    stage = 1
    while stage + 2 <= max_stages:
        r_b = support_fail_fraction(support_pmf_B, mu_a)
        new_mu_b = giant_random_removal(genfns_B, 1.0 - r_b)
        stages.append(StagePrediction(stage + 1, "power", new_mu_b, r_b))

        r_a = 1.0 - new_mu_b
        new_mu_a, _ = targeted_stage1(genfns_A.with_phi(base_phi * (1.0 - r_a)))
        stages.append(StagePrediction(stage + 2, "comm", new_mu_a, r_a))
        stage += 2

        done = abs(new_mu_a - mu_a) < tol and mu_b is not None and abs(new_mu_b - mu_b) < tol
        mu_a, mu_b = new_mu_a, new_mu_b
        if done:
            return CascadePrediction(stages, mu_a, mu_b, stage)

    raise NumericalError(
        f"stage recursion not steady after {stage} stages", last=(mu_a, mu_b), iterations=stage
    )


# --- grid-level model -------------------------------------------------------------

@dataclass(frozen=True)
class AnalyticModel:
    """Empirical inputs of the recursion for one grid."""

    comm: DegreeDistribution
    power: DegreeDistribution
    support: DegreeDistribution
    comm_nodes: int
    comm_edges: int

    @classmethod
    def from_grid(cls, grid):
        """Distributions over the alive part of ``grid`` (the whole grid when pristine)."""
        from .graphcore import degree_distribution

        counts = np.bincount(grid.support_of_comm[grid.comm.alive], minlength=grid.power.node_count)
        return cls(
            comm=degree_distribution(grid.comm),
            power=degree_distribution(grid.power),
            support=DegreeDistribution.from_samples(counts[grid.power.alive]),
            comm_nodes=grid.comm.alive_count,
            comm_edges=int(grid.comm.alive_degrees().sum() // 2),
        )

    def profile(self, kind, attack_size, method="linear"):
        if kind == "random":
            return random_profile(self.comm, attack_size, self.comm_nodes)
        if kind == "targeted":
            if method == "linear":
                return targeted_profile(self.comm, attack_size, self.comm_edges)
            if method == "successive":
                return successive_profile(self.comm, attack_size, self.comm_nodes)
            raise ValueError(f"unknown targeted profile method {method!r}")
        raise ValueError(f"no analytic treatment for attack kind {kind!r}")


def predict(model, kind, attack_size, coupled=True, method="linear"):
    """Steady-state prediction for ``attack_size`` comm nodes attacked."""
    gA = GenFnSet(model.comm, model.profile(kind, attack_size, method))
    if not coupled:
        mu, _ = targeted_stage1(gA)
        return CascadePrediction([StagePrediction(1, "comm", mu, 0.0)], mu, float("nan"), 1)
    return stage_recursion(gA, GenFnSet(model.power), model.support)


def critical_attack_size(model, kind="targeted", threshold=0.01, coupled=True, method="linear", mu=None):
    """Smallest attack size whose steady comm giant fraction drops below ``threshold``.

    Bisects over ``[0, n_A]`` assuming the giant fraction is monotone in
    the attack size. ``mu`` overrides the analytic prediction with any
    callable ``x -> mu_A`` (e.g. a simulation mean).
    """
    if mu is None:
        def mu(x):
            return predict(model, kind, x, coupled=coupled, method=method).steady_mu_A

    lo, hi = 0, model.comm_nodes
    if mu(lo) < threshold:
        return 0
    if mu(hi) >= threshold:
        return hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mu(mid) < threshold:
            hi = mid
        else:
            lo = mid
    return hi
