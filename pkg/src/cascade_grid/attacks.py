"""Attack samplers: uniform, degree-proportional and mixed.

All samplers draw from the alive nodes of a graph, without replacement,
and are deterministic in ``AttackSpec.seed``.
"""

from dataclasses import dataclass

import numpy as np

from . import _backend

RANDOM = "random"
TARGETED = "targeted"
MIXED = "mixed"
ATTACK_KINDS = (RANDOM, TARGETED, MIXED)


class AttackError(ValueError):
    pass


@dataclass(frozen=True)
class AttackSpec:
    kind: str
    count: int
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ATTACK_KINDS:
            raise AttackError(f"unknown attack kind {self.kind!r}; expected one of {ATTACK_KINDS}")
        if self.count < 0:
            raise AttackError("attack count must be non-negative")


@dataclass
class AttackResult:
    """Attacked nodes in pick order, with the weight each had when picked."""

    attacked: np.ndarray
    weights_used: np.ndarray

    def as_set(self):
        return set(self.attacked.tolist())

    def __len__(self):
        return len(self.attacked)


def _pool(g, spec):
    pool = g.alive_nodes()
    if spec.count > len(pool):
        raise AttackError(f"cannot attack {spec.count} nodes: only {len(pool)} alive")
    return pool


def _uniform(rng, pool, count):
    if count == 0:
        return np.empty(0, dtype=np.int64)
    return rng.choice(pool, size=count, replace=False).astype(np.int64)


def _degree_weighted(rng, g, pool, count):
    """Successive degree-proportional picks; zero-degree nodes fill in uniformly at the end."""
    deg = g.alive_degrees()[pool]
    uniforms = rng.random(count)
    idx = _backend.kernels.weighted_sample(np.ascontiguousarray(deg, dtype=np.int64), uniforms)
    picked = pool[idx]
    weights = deg[idx].astype(float)
    short = count - len(idx)
    if short:
        taken = np.zeros(len(pool), dtype=bool)
        taken[idx] = True
        rest = pool[~taken]
        extra = _uniform(rng, rest, short)
        picked = np.concatenate([picked, extra])
        weights = np.concatenate([weights, np.zeros(short)])
    return picked, weights


def sample_random(g, spec):
    pool = _pool(g, spec)
    rng = np.random.default_rng(spec.seed)
    picked = _uniform(rng, pool, spec.count)
    return AttackResult(picked, np.ones(len(picked)))


def sample_targeted(g, spec):
    """Pick nodes one at a time with probability ``deg / remaining degree total``.

    Weights are the alive degrees at call time and are not updated as
    picked nodes' edges disappear.
    """
    pool = _pool(g, spec)
    rng = np.random.default_rng(spec.seed)
    picked, weights = _degree_weighted(rng, g, pool, spec.count)
    return AttackResult(picked, weights)


def sample_mixed(g, spec):
    """``ceil(x/2)`` targeted picks, then ``floor(x/2)`` uniform picks from the rest."""
    pool = _pool(g, spec)
    rng = np.random.default_rng(spec.seed)
    n_targeted = (spec.count + 1) // 2
    picked, weights = _degree_weighted(rng, g, pool, n_targeted)
    remaining = np.setdiff1d(pool, picked, assume_unique=True)
    extra = _uniform(rng, remaining, spec.count - n_targeted)
    return AttackResult(np.concatenate([picked, extra]), np.concatenate([weights, np.ones(len(extra))]))


_SAMPLERS = {RANDOM: sample_random, TARGETED: sample_targeted, MIXED: sample_mixed}


def sample_attack(g, spec):
    return _SAMPLERS[spec.kind](g, spec)


def first_pick_survival(g):
    """Per-node probability of *not* being the first targeted pick: ``1 - k / 2m``."""
    deg = g.alive_degrees().astype(float)
    total = deg.sum()
    if total == 0:
        return np.ones_like(deg)
    return 1.0 - deg / total
