"""Attack-sweep experiments: build a grid, attack it many times, aggregate.

Each (kind, x, replication) run gets its own attack seed derived from a
stable hash, so sweeps are reproducible regardless of worker count or
completion order.
"""

import csv
import hashlib
import json
import logging
import os
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path


from .analytic import AnalyticModel, predict
from .attacks import ATTACK_KINDS, AttackSpec, sample_attack
from .cascade import run_cascade, stabilize
from .netgen import NetworkRecipe, assign_support_links, generate_network

logger = logging.getLogger(__name__)

RAW_COLUMNS = ["kind", "x", "rep", "mu_A", "mu_B", "stages"]
SUMMARY_COLUMNS = ["kind", "x", "mean_mu_A", "std_mu_A", "mean_mu_B", "std_mu_B", "n"]


class ConfigError(ValueError):
    pass


def derive_seed(base_seed, *parts):
    """64-bit seed from BLAKE2b over ``base_seed`` and ``parts`` joined by ``/``."""
    key = "/".join(str(p) for p in (base_seed, *parts)).encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "little")


@dataclass
class ExperimentConfig:
    comm_recipe: NetworkRecipe
    power_recipe: NetworkRecipe
    attack_kinds: list
    x_values: list
    replications: int = 50
    base_seed: int = 0
    output_path: str | None = None
    preprune: bool = False
    regenerate_grid: bool = False

    def __post_init__(self):
        if self.replications < 1:
            raise ConfigError("replications must be >= 1")
        bad = [k for k in self.attack_kinds if k not in ATTACK_KINDS]
        if bad:
            raise ConfigError(f"unknown attack kinds {bad}; expected a subset of {list(ATTACK_KINDS)}")
        n_a = self.comm_recipe.node_count
        out = [x for x in self.x_values if not 0 <= x <= n_a]
        if out:
            raise ConfigError(f"x values {out} outside [0, {n_a}]")

    @classmethod
    def from_json(cls, obj):
        known = {"comm", "power", "attacks", "x_values", "replications", "base_seed", "output",
                 "preprune", "regenerate_grid"}
        extra = set(obj) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        try:
            return cls(
                comm_recipe=NetworkRecipe.from_json(obj["comm"]),
                power_recipe=NetworkRecipe.from_json(obj["power"]),
                attack_kinds=list(obj.get("attacks", list(ATTACK_KINDS))),
                x_values=[int(x) for x in obj["x_values"]],
                replications=int(obj.get("replications", 50)),
                base_seed=int(obj.get("base_seed", 0)),
                output_path=obj.get("output"),
                preprune=bool(obj.get("preprune", False)),
                regenerate_grid=bool(obj.get("regenerate_grid", False)),
            )
        except KeyError as exc:
            raise ConfigError(f"missing config key {exc}") from None
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def load(cls, path):
        try:
            with open(path) as fh:
                obj = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from None
        return cls.from_json(obj)

    def to_json(self):
        return {
            "comm": self.comm_recipe.to_json(),
            "power": self.power_recipe.to_json(),
            "attacks": list(self.attack_kinds),
            "x_values": list(self.x_values),
            "replications": self.replications,
            "base_seed": self.base_seed,
            "output": self.output_path,
            "preprune": self.preprune,
            "regenerate_grid": self.regenerate_grid,
        }


@dataclass(frozen=True)
class RunRow:
    kind: str
    x: int
    rep: int
    mu_A: float
    mu_B: float
    stages: int


@dataclass(frozen=True)
class AggregateRow:
    kind: str
    x: int
    mean_mu_A: float
    std_mu_A: float
    mean_mu_B: float
    std_mu_B: float
    n: int


def aggregate_rows(rows):
    """Mean and population std per (kind, x), in first-appearance order."""
    groups = {}
    for r in rows:
        groups.setdefault((r.kind, r.x), []).append(r)
    out = []
    for (kind, x), rs in groups.items():
        a = [r.mu_A for r in rs]
        b = [r.mu_B for r in rs]
        out.append(AggregateRow(kind, x, statistics.fmean(a), statistics.pstdev(a),
                                statistics.fmean(b), statistics.pstdev(b), len(rs)))
    return out


@dataclass
class SweepResult:
    rows: list = field(default_factory=list)

    @property
    def aggregates(self):
        return aggregate_rows(self.rows)

    def mean_mu(self, kind, x, side="A"):
        for agg in self.aggregates:
            if agg.kind == kind and agg.x == x:
                return agg.mean_mu_A if side == "A" else agg.mean_mu_B
        raise KeyError((kind, x))


def build_experiment_grid(config, rep=None):
    """The pristine grid for a config; per-replication grids when ``rep`` is given."""
    comm_recipe, power_recipe = config.comm_recipe, config.power_recipe
    support_seed = derive_seed(config.base_seed, "support")
    if rep is not None:
        comm_recipe = _reseeded(comm_recipe, derive_seed(comm_recipe.seed, "grid", rep))
        power_recipe = _reseeded(power_recipe, derive_seed(power_recipe.seed, "grid", rep))
        support_seed = derive_seed(config.base_seed, "support", rep)
    grid = assign_support_links(generate_network(comm_recipe), generate_network(power_recipe), support_seed)
    if config.preprune:
        stabilize(grid)
    return grid


def _reseeded(recipe, seed):
    d = recipe.to_json()
    d["seed"] = seed
    return NetworkRecipe.from_json(d)


def _run_block(config, grid, kind, x, reps):
    rows = []
    for rep in reps:
        g = grid if grid is not None else build_experiment_grid(config, rep)
        spec = AttackSpec(kind, x, derive_seed(config.base_seed, kind, x, rep))
        attacked = sample_attack(g.comm, spec).attacked
        trace = run_cascade(g, attacked)
        rows.append(RunRow(kind, x, rep, trace.final_mu_A, trace.final_mu_B, trace.stages))
    return rows


def run_experiment(config, workers=1, grid=None):
    """Run every (kind, x, replication) cascade of ``config``.

    The grid is generated once and reused for every run unless
    ``config.regenerate_grid`` is set. Rows come back ordered by kind,
    x and replication whatever ``workers`` is.
    """
    if grid is None and not config.regenerate_grid:
        grid = build_experiment_grid(config)
    shared = None if config.regenerate_grid else grid
    reps = range(config.replications)
    blocks = [(kind, x) for kind in config.attack_kinds for x in config.x_values]
    logger.info("running %d blocks x %d replications", len(blocks), config.replications)
    if workers > 1 and len(blocks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_block, config, shared, kind, x, reps) for kind, x in blocks]
            results = [f.result() for f in futures]
    else:
        results = [_run_block(config, shared, kind, x, reps) for kind, x in blocks]
    return SweepResult([row for block in results for row in block])


def summary_path_for(path):
    p = Path(path)
    return p.with_name(f"{p.stem}_summary{p.suffix or '.csv'}")


def emit_csv(result, path):
    """Write raw rows to ``path`` and aggregates to ``<stem>_summary.csv`` beside it."""
    raw = Path(path)
    summary = summary_path_for(raw)
    try:
        if raw.parent and not raw.parent.exists():
            os.makedirs(raw.parent, exist_ok=True)
        with open(raw, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(RAW_COLUMNS)
            for r in result.rows:
                w.writerow([r.kind, r.x, r.rep, repr(r.mu_A), repr(r.mu_B), r.stages])
        with open(summary, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(SUMMARY_COLUMNS)
            for a in result.aggregates:
                w.writerow([a.kind, a.x, repr(a.mean_mu_A), repr(a.std_mu_A), repr(a.mean_mu_B),
                            repr(a.std_mu_B), a.n])
    except OSError as exc:
        raise OSError(f"cannot write results to {raw}: {exc}") from exc
    return raw, summary


def read_raw_csv(path):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        return [
            RunRow(r["kind"], int(r["x"]), int(r["rep"]), float(r["mu_A"]), float(r["mu_B"]), int(r["stages"]))
            for r in reader
        ]


def read_summary_csv(path):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        return [
            AggregateRow(r["kind"], int(r["x"]), float(r["mean_mu_A"]), float(r["std_mu_A"]),
                         float(r["mean_mu_B"]), float(r["std_mu_B"]), int(r["n"]))
            for r in reader
        ]


@dataclass(frozen=True)
class ComparisonRow:
    kind: str
    x: int
    mu_sim_A: float
    mu_analytic_A: float
    delta_A: float
    mu_sim_B: float
    mu_analytic_B: float
    delta_B: float


def compare_analytic(config, workers=1, method="linear", grid=None):
    """Simulation means next to the stage-recursion steady state, per (kind, x).

    The recursion is fed the grid's empirical degree and support-degree
    distributions. Only random and targeted attacks have a prediction.
    """
    kinds = [k for k in config.attack_kinds if k in ("random", "targeted")]
    if not kinds:
        raise ConfigError("compare_analytic needs a random or targeted attack kind")
    if grid is None:
        grid = build_experiment_grid(config)
    sim_config = ExperimentConfig(**{**config.__dict__, "attack_kinds": kinds, "regenerate_grid": False})
    result = run_experiment(sim_config, workers=workers, grid=grid)
    model = AnalyticModel.from_grid(grid)
    # the recursion expresses fractions of the original network sizes
    scale_a = grid.comm.alive_count / grid.comm.node_count
    scale_b = grid.power.alive_count / grid.power.node_count
    rows = []
    for agg in result.aggregates:
        pred = predict(model, agg.kind, agg.x, method=method)
        mu_a = pred.steady_mu_A * scale_a
        mu_b = pred.steady_mu_B * scale_b
        rows.append(ComparisonRow(agg.kind, agg.x, agg.mean_mu_A, mu_a, abs(agg.mean_mu_A - mu_a),
                                  agg.mean_mu_B, mu_b, abs(agg.mean_mu_B - mu_b)))
    return rows
