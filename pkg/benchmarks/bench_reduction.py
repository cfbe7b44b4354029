"""Time the boundary-matrix reduction on both backends.

    python3 benchmarks/bench_reduction.py [--sizes 15 25 35] [--max-dim 3] [--repeat 3]

The numpy fallback is far slower, so it is skipped above ``--numpy-limit``
simplices.
"""
import argparse
import time

import numpy as np

from socioplex.complex import build_filtration
from socioplex.metric import distance_matrix
from socioplex.persistence import boundary_matrix, reduce
from socioplex.synthetic import random_agents, random_weights


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[15, 25, 35, 50])
    parser.add_argument("--max-dim", type=int, default=3)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--numpy-limit", type=int, default=40_000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    # compile outside the timed region
    warm = boundary_matrix(build_filtration(np.ones((4, 4)) - np.eye(4), 3))
    reduce(warm, backend="numba")

    print(f"{'agents':>6} {'simplices':>10} {'additions':>10} {'numba s':>9} {'numpy s':>9} {'speedup':>8}")
    for n in args.sizes:
        rng = np.random.default_rng(args.seed + n)
        m = distance_matrix(random_agents(n, rng), random_weights(rng))
        bm = boundary_matrix(build_filtration(m, args.max_dim))
        t_jit, res = best_of(lambda: reduce(bm, backend="numba"), args.repeat)
        if len(bm) <= args.numpy_limit:
            t_np, res_np = best_of(lambda: reduce(bm, backend="numpy"), 1)
            assert np.array_equal(res.low, res_np.low), "backends disagree"
            np_col, ratio = f"{t_np:9.3f}", f"{t_np / t_jit:7.1f}x"
        else:
            np_col, ratio = f"{'skipped':>9}", f"{'-':>8}"
        print(f"{n:>6} {len(bm):>10} {res.additions:>10} {t_jit:9.3f} {np_col} {ratio}")


if __name__ == "__main__":
    main()
