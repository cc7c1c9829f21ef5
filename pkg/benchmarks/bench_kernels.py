"""Compare the compiled and numpy grid kernels.

    python benchmarks/bench_kernels.py [--points 64 128 256] [--terms 1 8 32] [--repeat 5]

Prints one row per (points, terms) with the best-of-``repeat`` wall time of
each backend, their ratio and the max abs difference of the kernels.
"""
import argparse
import timeit

import numpy as np

from heisenberg_orbits.functions import random_gaussian_sum
from heisenberg_orbits.grid import GridSpec
from heisenberg_orbits.kernels import available_backends, gaussian_sum_grid


def bench(points, terms, repeat, rng):
    g = random_gaussian_sum(rng, 2, terms)
    nodes = GridSpec(6.0, points).nodes
    row = {"points": points, "terms": terms}
    out = {}
    for b in available_backends():
        out[b] = gaussian_sum_grid(g, nodes, nodes, backend=b)
        t = timeit.repeat(lambda: gaussian_sum_grid(g, nodes, nodes, backend=b),
                          number=1, repeat=repeat)
        row[b] = min(t)
    if len(out) == 2:
        row["speedup"] = row["python"] / row["cython"]
        row["maxdiff"] = float(np.abs(out["python"] - out["cython"]).max())
    return row


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, nargs="+", default=[64, 128, 256])
    ap.add_argument("--terms", type=int, nargs="+", default=[1, 8, 32])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    backends = available_backends()
    head = f"{'points':>6} {'terms':>5} " + " ".join(f"{b + ' [ms]':>13}" for b in backends)
    if len(backends) == 2:
        head += f" {'speedup':>8} {'max diff':>9}"
    print(head)
    for n in args.points:
        for t in args.terms:
            r = bench(n, t, args.repeat, rng)
            line = f"{n:>6} {t:>5} " + " ".join(f"{1e3 * r[b]:>13.3f}" for b in backends)
            if "speedup" in r:
                line += f" {r['speedup']:>8.2f} {r['maxdiff']:>9.1e}"
            print(line)


if __name__ == "__main__":
    main()
