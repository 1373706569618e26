"""``cascade-grid`` command line."""

import argparse
import json
import logging
import sys

from . import _backend
from .analytic import AnalyticModel, GenFnSet, critical_attack_size, giant_random_removal, predict, solve_u
from .attacks import ATTACK_KINDS, AttackSpec, sample_attack
from .cascade import run_cascade, write_trace_csv
from .distribution import read_pmf_csv
from .harness import ExperimentConfig, build_experiment_grid, compare_analytic, emit_csv, run_experiment
from .netgen import load_grid, save_grid


def _attack_args(p):
    p.add_argument("--grid", required=True, help="directory written by 'generate'")
    p.add_argument("--attack", choices=ATTACK_KINDS, required=True)
    p.add_argument("--x", type=int, required=True, help="number of comm nodes to attack")
    p.add_argument("--seed", type=int, default=0)


def cmd_experiment(args):
    config = ExperimentConfig.load(args.config)
    output = args.output or config.output_path
    if args.compare:
        rows = compare_analytic(config, workers=args.workers)
        print("kind,x,mu_sim_A,mu_analytic_A,delta_A,mu_sim_B,mu_analytic_B,delta_B")
        for r in rows:
            print(f"{r.kind},{r.x},{r.mu_sim_A:.6f},{r.mu_analytic_A:.6f},{r.delta_A:.6f},"
                  f"{r.mu_sim_B:.6f},{r.mu_analytic_B:.6f},{r.delta_B:.6f}")
        return 0
    result = run_experiment(config, workers=args.workers)
    if output:
        raw, summary = emit_csv(result, output)
        print(f"wrote {raw} and {summary}")
    else:
        print("kind,x,mean_mu_A,std_mu_A,mean_mu_B,std_mu_B,n")
        for a in result.aggregates:
            print(f"{a.kind},{a.x},{a.mean_mu_A:.6f},{a.std_mu_A:.6f},{a.mean_mu_B:.6f},{a.std_mu_B:.6f},{a.n}")
    return 0


def cmd_generate(args):
    config = ExperimentConfig.load(args.config)
    grid = build_experiment_grid(config)
    save_grid(grid, args.out)
    print(f"comm: {grid.comm.node_count} nodes, {grid.comm.edge_count} edges; "
          f"power: {grid.power.node_count} nodes, {grid.power.edge_count} edges -> {args.out}")
    return 0


def cmd_attack(args):
    grid = load_grid(args.grid)
    result = sample_attack(grid.comm, AttackSpec(args.attack, args.x, args.seed))
    lines = "\n".join(str(v) for v in result.attacked.tolist())
    if args.dump:
        with open(args.dump, "w") as fh:
            fh.write(lines + ("\n" if lines else ""))
    else:
        print(lines)
    return 0


def cmd_cascade(args):
    grid = load_grid(args.grid)
    attacked = sample_attack(grid.comm, AttackSpec(args.attack, args.x, args.seed)).attacked
    trace = run_cascade(grid, attacked, preprune=args.preprune)
    if args.trace:
        write_trace_csv(trace, args.trace)
    print(f"stages={trace.stages} converged={trace.converged} "
          f"mu_A={trace.final_mu_A:.6f} mu_B={trace.final_mu_B:.6f}")
    return 0


def cmd_analytic(args):
    if args.analytic_cmd == "cascade":
        return cmd_analytic_cascade(args)
    if args.dist is None or args.phi is None:
        raise SystemExit("analytic: --dist and --phi are required (or use 'analytic cascade')")
    g = GenFnSet(read_pmf_csv(args.dist))
    u = solve_u(g, args.phi)
    print(f"u={u:.12g} mu={giant_random_removal(g, args.phi):.12g}")
    return 0


def cmd_analytic_cascade(args):
    config = ExperimentConfig.load(args.config)
    model = AnalyticModel.from_grid(build_experiment_grid(config))
    kinds = [k for k in config.attack_kinds if k != "mixed"]
    xs = args.x if args.x else config.x_values
    print("kind,x,steady_mu_A,steady_mu_B,stages")
    for kind in kinds:
        for x in xs:
            p = predict(model, kind, x, method=args.profile)
            print(f"{kind},{x},{p.steady_mu_A:.6f},{p.steady_mu_B:.6f},{p.iterations}")
    if args.critical:
        for kind in kinds:
            xc = critical_attack_size(model, kind, threshold=args.threshold, method=args.profile)
            print(f"# critical attack size ({kind}, mu_A < {args.threshold}): {xc}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="cascade-grid", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    parser.add_argument("--backend", choices=_backend.available_backends(), help="kernel backend")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("experiment", help="run an attack sweep from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--output", help="raw CSV path (summary goes next to it)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--compare", action="store_true", help="print simulation vs analytic table instead")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("generate", help="generate the config's grid and save it")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("attack", help="sample an attack set on a saved grid")
    _attack_args(p)
    p.add_argument("--dump", help="write attacked indices here, one per line")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("cascade", help="attack a saved grid and run the cascade")
    _attack_args(p)
    p.add_argument("--trace", help="write the stage trace CSV here")
    p.add_argument("--preprune", action="store_true", help="settle the unattacked grid first")
    p.set_defaults(func=cmd_cascade)

    p = sub.add_parser("analytic", help="generating-function calculations")
    p.add_argument("--dist", help="pmf CSV with k,probability rows")
    p.add_argument("--phi", type=float, help="surviving fraction")
    p.set_defaults(func=cmd_analytic, analytic_cmd=None)
    asub = p.add_subparsers(dest="analytic_cmd")
    ap = asub.add_parser("cascade", help="stage-recursion steady state for a config's grid")
    ap.add_argument("--config", required=True)
    ap.add_argument("--x", type=int, nargs="*", help="attack sizes (default: config x_values)")
    ap.add_argument("--profile", choices=["linear", "successive"], default="linear")
    ap.add_argument("--critical", action="store_true", help="also bisect for the critical attack size")
    ap.add_argument("--threshold", type=float, default=0.01)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.backend:
        _backend.set_backend(args.backend)
    try:
        return args.func(args)
    except (OSError, ValueError, ArithmeticError, RuntimeError, KeyError, json.JSONDecodeError) as exc:
        print(f"cascade-grid: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
