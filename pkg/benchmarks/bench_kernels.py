#!/usr/bin/env python3
"""Compare the numba and pure-Python backtracking kernels.

Runs the k-cordial search over every free tree of one order (and over some
random larger trees) with each kernel and reports wall time and steps/s.
Both kernels must agree on every verdict and step count.

    python3 benchmarks/bench_kernels.py --n 11 --k 6
"""
import argparse
import time

from cordial import _kernels
from cordial.oracle import backtrack_k_cordial, enumerate_free_trees, random_tree


def run(trees, k, use_numba):
    t0 = time.perf_counter()
    out = [backtrack_k_cordial(t, k, use_numba=use_numba) for t in trees]
    return time.perf_counter() - t0, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=11, help="order of the exhaustive batch")
    ap.add_argument("--k", type=int, default=6)
    ap.add_argument("--random", type=int, default=10, help="number of random trees")
    ap.add_argument("--random-n", type=int, default=30)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    batches = {
        f"all trees n={args.n}": list(enumerate_free_trees(args.n)),
        f"{args.random} random n={args.random_n}": [random_tree(args.random_n, args.seed + i)
                                                    for i in range(args.random)],
    }
    print(f"numba available: {_kernels.HAS_NUMBA}")
    if _kernels.HAS_NUMBA:
        backtrack_k_cordial(batches[f"all trees n={args.n}"][0], args.k, use_numba=True)  # compile
    print(f"{'batch':<24}{'kernel':<8}{'seconds':>10}{'steps':>12}{'steps/s':>14}")
    for name, trees in batches.items():
        secs_py, res_py = run(trees, args.k, use_numba=False)
        steps = sum(r.steps for r in res_py)
        print(f"{name:<24}{'python':<8}{secs_py:>10.3f}{steps:>12}{steps / secs_py:>14.0f}")
        if not _kernels.HAS_NUMBA:
            continue
        secs_nb, res_nb = run(trees, args.k, use_numba=True)
        assert [(r.sat, r.steps) for r in res_nb] == [(r.sat, r.steps) for r in res_py], "kernels disagree"
        print(f"{name:<24}{'numba':<8}{secs_nb:>10.3f}{steps:>12}{steps / secs_nb:>14.0f}"
              f"   speedup {secs_py / secs_nb:.1f}x")


if __name__ == "__main__":
    main()
