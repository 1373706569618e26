"""Discrete degree distributions.

A :class:`DegreeDistribution` is a dense probability vector indexed by
degree. It is shared by the graph layer (empirical degree and
support-degree distributions) and the analytic solver (generating
functions).
"""

import csv
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

NORMALIZATION_TOL = 1e-12


class DistributionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class DegreeDistribution:
    """Probability mass function over non-negative integer degrees.

    ``pmf[k]`` is the probability of degree ``k``. Trailing zeros are
    stripped on construction.
    """

    pmf: np.ndarray
    mean_degree: float = field(init=False)

    def __post_init__(self):
        p = np.asarray(self.pmf, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise DistributionError("pmf must be a non-empty 1-d array")
        if np.any(p < 0) or not np.all(np.isfinite(p)):
            raise DistributionError("probabilities must be finite and non-negative")
        total = p.sum()
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise DistributionError(f"probabilities sum to {total!r}, not 1")
        nz = np.flatnonzero(p)
        p = p[: nz[-1] + 1].copy() if nz.size else p[:1].copy()
        p.setflags(write=False)
        object.__setattr__(self, "pmf", p)
        object.__setattr__(self, "mean_degree", float(np.dot(np.arange(p.size), p)))

    @classmethod
    def from_samples(cls, degrees):
        """Empirical distribution of a sequence of integer degrees."""
        d = np.asarray(degrees, dtype=np.int64)
        if d.size == 0:
            raise DistributionError("no samples")
        if d.min() < 0:
            raise DistributionError("degrees must be non-negative")
        counts = np.bincount(d)
        return cls(counts / d.size)

    @classmethod
    def from_mapping(cls, probs, normalize=False):
        if not probs:
            raise DistributionError("empty mapping")
        kmax = max(probs)
        if min(probs) < 0:
            raise DistributionError("degrees must be non-negative")
        p = np.zeros(kmax + 1)
        for k, v in probs.items():
            p[k] += v
        if normalize:
            p = p / p.sum()
        return cls(p)

    @classmethod
    def point_mass(cls, k):
        p = np.zeros(k + 1)
        p[k] = 1.0
        return cls(p)

    @classmethod
    def binomial(cls, n, prob):
        p = stats.binom.pmf(np.arange(n + 1), n, prob)
        return cls(p / p.sum())

    @classmethod
    def poisson(cls, mean, kmax=None):
        """Poisson distribution truncated at ``kmax`` and renormalized."""
        if kmax is None:
            kmax = int(mean + 12 * np.sqrt(mean) + 20)
        p = stats.poisson.pmf(np.arange(kmax + 1), mean)
        return cls(p / p.sum())

    @classmethod
    def power_law(cls, alpha, kmin, kmax):
        """``P(k) proportional to k**-alpha`` on ``kmin..kmax``."""
        if not 1 <= kmin <= kmax:
            raise DistributionError("need 1 <= kmin <= kmax")
        p = np.zeros(kmax + 1)
        ks = np.arange(kmin, kmax + 1, dtype=float)
        p[kmin:] = ks**-alpha
        return cls(p / p.sum())

    @property
    def kmax(self):
        return self.pmf.size - 1

    @property
    def support(self):
        return np.flatnonzero(self.pmf)

    def probability(self, k):
        return float(self.pmf[k]) if 0 <= k < self.pmf.size else 0.0

    def second_moment(self):
        k = np.arange(self.pmf.size)
        return float(np.dot(k * k, self.pmf))

    def variance(self):
        return self.second_moment() - self.mean_degree**2

    def to_dict(self):
        return {int(k): float(self.pmf[k]) for k in self.support}

    def total_variation(self, other):
        a, b = self.pmf, other.pmf
        size = max(a.size, b.size)
        a = np.pad(a, (0, size - a.size))
        b = np.pad(b, (0, size - b.size))
        return 0.5 * float(np.abs(a - b).sum())

    def __eq__(self, other):
        if not isinstance(other, DegreeDistribution):
            return NotImplemented
        return np.array_equal(self.pmf, other.pmf)

    def __repr__(self):
        return f"DegreeDistribution(kmax={self.kmax}, mean={self.mean_degree:.4g})"


def read_pmf_csv(path):
    """Read ``k,probability`` rows (header optional) into a distribution."""
    probs = {}
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                k, v = int(row[0]), float(row[1])
            except ValueError:
                if not probs:
                    continue  # header
                raise DistributionError(f"{path}: bad row {row!r}") from None
            probs[k] = probs.get(k, 0.0) + v
    if not probs:
        raise DistributionError(f"{path}: no rows")
    return DegreeDistribution.from_mapping(probs)


def write_pmf_csv(dist, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "probability"])
        for k, v in dist.to_dict().items():
            writer.writerow([k, repr(v)])
