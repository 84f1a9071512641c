"""Compare the numba and pure-numpy hot kernels.

    python benchmarks/bench_kernels.py [--n 20000] [--k 5] [--repeat 7]

Per-kernel timings call both flavours directly. The end-to-end row runs one
view absorption in a subprocess per backend, since the backend is fixed at
import time by CACLUSTER_DISABLE_NUMBA.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from cacluster import _kernels

END_TO_END = """
import time, numpy as np
from cacluster import CacConfig, cac_init, absorb_view
from cacluster.linalg import random_orthonormal_columns
rng = np.random.default_rng(0)
h1, h2 = (random_orthonormal_columns({n}, {k}, rng) for _ in range(2))
state = cac_init(h1, {k}, CacConfig())
absorb_view(state, h2)  # warm-up, includes jit compilation
best = float('inf')
for _ in range({repeat}):
    t0 = time.perf_counter(); absorb_view(state, h2); best = min(best, time.perf_counter() - t0)
print(best)
"""


def kernel_cases(n, k, rng):
    x = rng.standard_normal((n, k))
    labels = rng.integers(0, k, n)
    centers = rng.standard_normal((k, k))
    small = rng.standard_normal((min(n, 2000), k))
    return {
        "pairwise_sq_dists": (small,),
        "row_argmax": (x,),
        "group_sum": (labels, x, k),
        "assign_nearest": (x, centers),
    }


def best_of(fn, args, repeat):
    fn(*args)
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def end_to_end(n, k, repeat, disable):
    env = dict(os.environ, CACLUSTER_DISABLE_NUMBA="1" if disable else "0")
    code = END_TO_END.format(n=n, k=k, repeat=repeat)
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=20000)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--repeat", type=int, default=7)
    args = p.parse_args(argv)
    if not _kernels.HAVE_NUMBA:
        print("numba is not installed; only the numpy flavour is available")
        return 1
    rng = np.random.default_rng(0)
    print(f"{'kernel':<20}{'numba ms':>12}{'numpy ms':>12}{'speedup':>10}")
    for name, call_args in kernel_cases(args.n, args.k, rng).items():
        t_nb = best_of(getattr(_kernels, name + "_numba"), call_args, args.repeat)
        t_np = best_of(getattr(_kernels, name + "_numpy"), call_args, args.repeat)
        print(f"{name:<20}{t_nb * 1e3:>12.3f}{t_np * 1e3:>12.3f}{t_np / t_nb:>10.2f}")
    t_nb = end_to_end(args.n, args.k, args.repeat, disable=False)
    t_np = end_to_end(args.n, args.k, args.repeat, disable=True)
    print(f"{'absorb_view':<20}{t_nb * 1e3:>12.3f}{t_np * 1e3:>12.3f}{t_np / t_nb:>10.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
