"""Compare the compiled and pure-Python ``interp_pair_sum`` kernels.

    python3 benchmarks/bench_kernels.py [--nodes N] [--repeat R]

Prints the median time per call for each backend, the speed-up and the
largest relative difference between the two results.
"""
import argparse
import statistics
import time

import numpy as np

from roughsq import _kernels_py

try:
    from roughsq import _kernels as compiled
except ImportError:  # extension not built
    compiled = None


def make_inputs(nodes, seed=0):
    rng = np.random.default_rng(seed)
    values = np.cumsum(rng.standard_normal(1 << 14)) / 128.0
    s = rng.uniform(-4.0, 4.0, nodes)
    t = rng.uniform(-4.0, 4.0, nodes)
    s[s == 0] = 1.0
    t[t == 0] = 0.5
    return values, -32.0, 64.0 / values.size, 0.125, s, t, rng.uniform(0.0, 1.0, nodes)


def median_time(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, nargs="+", default=[1_000, 10_000, 100_000])
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args(argv)
    print(f"{'nodes':>8} {'python [ms]':>12} {'cython [ms]':>12} {'speed-up':>9} {'rel diff':>9}")
    for n in args.nodes:
        inp = make_inputs(n)
        tp = median_time(_kernels_py.interp_pair_sum, inp, args.repeat)
        if compiled is None:
            print(f"{n:8d} {tp * 1e3:12.3f} {'n/a':>12} {'n/a':>9} {'n/a':>9}")
            continue
        tc = median_time(compiled.interp_pair_sum, inp, args.repeat)
        a, b = _kernels_py.interp_pair_sum(*inp), compiled.interp_pair_sum(*inp)
        print(f"{n:8d} {tp * 1e3:12.3f} {tc * 1e3:12.3f} {tp / tc:9.2f} "
              f"{abs(a - b) / abs(a):9.1e}")


if __name__ == "__main__":
    main()
