"""Time the compiled and pure-Python kernel backends side by side.

    python3 benchmarks/bench_kernels.py [--n 10000] [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from cascade_grid import _backend
from cascade_grid.attacks import AttackSpec, sample_attack
from cascade_grid.cascade import run_cascade
from cascade_grid.netgen import NetworkRecipe, build_grid


def cases(grid, rng):
    g = grid.comm
    n = g.node_count
    mask = np.ones(n, dtype=np.uint8)
    mask[rng.choice(n, n // 4, replace=False)] = 0
    deg = g.degrees().astype(np.int64)
    uniforms = rng.random(n // 4)
    attacks = [sample_attack(g, AttackSpec("targeted", n // 10, s)).attacked for s in range(10)]

    def labels():
        _backend.kernels.component_labels(g.indptr, g.indices, mask)

    def prune():
        _backend.kernels.prune_to_giant(g.indptr, g.indices, mask.copy())

    def weighted():
        _backend.kernels.weighted_sample(deg, uniforms)

    def cascades():
        for a in attacks:
            run_cascade(grid, a)

    return {"component_labels": labels, "prune_to_giant": prune,
            "weighted_sample (n/4 picks)": weighted, "run_cascade x10": cascades}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=10000, help="comm network size")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    grid = build_grid(NetworkRecipe("sf", args.n, seed=1), NetworkRecipe("sf", max(args.n // 10, 10), seed=2), 3)
    backends = _backend.available_backends()
    timings = {}
    for name in backends:
        with _backend.use_backend(name):
            for label, fn in cases(grid, np.random.default_rng(0)).items():
                timings.setdefault(label, {})[name] = min(timeit.repeat(fn, number=1, repeat=args.repeat))

    print(f"n_A={args.n}, best of {args.repeat}, seconds")
    print(f"{'kernel':30s}" + "".join(f"{b:>12s}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for label, t in timings.items():
        line = f"{label:30s}" + "".join(f"{t[b]:12.5f}" for b in backends)
        if "cython" in t and "python" in t:
            line += f"{t['python'] / t['cython']:11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
