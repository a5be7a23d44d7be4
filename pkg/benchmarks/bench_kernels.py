"""Compare the compiled and numpy DSS kernels on planted-partition graphs.

    python benchmarks/bench_kernels.py [--sizes 2500 10000] [--repeats 3]
"""

import argparse
import time

import numpy as np

from ohamuhi import kernels
from ohamuhi.benchgen import gen_planted_partition
from ohamuhi.dss import dss_fixed_point, local_cosine


def best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[2500, 10000])
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    backends = kernels.available_backends()
    print("nodes,edges,measure," + ",".join(f"{b}_s" for b in backends) + ",speedup,identical")
    for n in args.sizes:
        g, _ = gen_planted_partition(n, max(1, n // 50), 0.6, 10 / n, seed=1)
        for name, fn in (("dss", lambda b: dss_fixed_point(g, threads=args.threads, backend=b)),
                         ("cosine", lambda b: local_cosine(g, backend=b))):
            times, values = [], []
            for b in backends:
                t, sim = best_of(lambda: fn(b), args.repeats)
                times.append(t)
                values.append(sim.values)
            same = all(np.array_equal(values[0], v) for v in values[1:])
            speedup = times[-1] / times[0] if len(times) > 1 else 1.0
            cols = ",".join(f"{t:.4f}" for t in times)
            print(f"{g.node_count},{g.edge_count},{name},{cols},{speedup:.2f},{same}")


if __name__ == "__main__":
    main()
