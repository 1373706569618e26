"""Cascading failures in interdependent power/communication networks.

Simulation (``netgen``, ``attacks``, ``cascade``, ``harness``) and
generating-function analysis (``analytic``) of attacks on the
communication side of a smart grid.
"""

from ._backend import BACKEND, available_backends, set_backend, use_backend
from .analytic import (
    AnalyticModel,
    CascadePrediction,
    GenFnSet,
    NumericalError,
    critical_attack_size,
    giant_random_removal,
    percolation_threshold,
    predict,
    solve_u,
    stage_recursion,
    support_fail_fraction,
    targeted_profile,
    targeted_stage1,
)
from .attacks import AttackResult, AttackSpec, sample_attack, sample_mixed, sample_random, sample_targeted
from .cascade import (
    CascadeTrace,
    StageRecord,
    apply_attack,
    fail_unsupported_comm,
    fail_unsupported_power,
    prune_to_giant,
    run_cascade,
)
from .distribution import DegreeDistribution
from .graphcore import (
    ComponentLabeling,
    Graph,
    GraphError,
    build_graph,
    degree_distribution,
    giant_fraction,
    largest_component,
)
from .harness import ExperimentConfig, SweepResult, compare_analytic, emit_csv, run_experiment
from .netgen import (
    InterdependentGrid,
    NetworkRecipe,
    assign_support_links,
    generate_network,
    support_degree_distribution,
)

__version__ = "0.1.0"
