"""Compare the compiled and pure-Python GF(2) reduction lanes.

Builds random geometric graphs, runs the flag-triangle column reduction
through both implementations, checks they agree, and prints timings.

Usage: python benchmarks/bench_gf2.py [n_points ...]
"""

import sys
import time

import numpy as np

from covtrack import _gf2pure
from covtrack import kernels


def geometric_edges(n: int, radius: float, seed: int):
    rng = np.random.Generator(np.random.Philox(key=seed))
    pts = rng.random((n, 2))
    delta = pts[:, None, :] - pts[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", delta, delta)
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            if d2[i, j] <= radius * radius:
                out.append((i + 1, j + 1))
    return out


def run_pure(n, edges):
    t0 = time.perf_counter()
    basis = _gf2pure.flag_d2_basis(n, edges)
    return basis.rank, time.perf_counter() - t0


def run_compiled(n, edges):
    if not kernels.COMPILED:
        return None, None
    t0 = time.perf_counter()
    basis = kernels.flag_d2_basis(n, edges)
    return basis.rank, time.perf_counter() - t0


def main(argv):
    sizes = [int(a) for a in argv[1:]] or [100, 200, 400]
    print(f"compiled lane available: {kernels.COMPILED}")
    print(f"{'n':>6} {'edges':>8} {'rank':>7} {'pure (s)':>10} {'compiled (s)':>13} {'speedup':>8}")
    for i, n in enumerate(sizes):
        edges = geometric_edges(n, radius=0.2, seed=1000 + i)
        rank_p, dt_p = run_pure(n, edges)
        rank_c, dt_c = run_compiled(n, edges)
        if rank_c is not None and rank_c != rank_p:
            raise SystemExit(f"lane disagreement at n={n}: {rank_p} vs {rank_c}")
        speed = f"{dt_p / dt_c:8.1f}x" if dt_c else "     n/a"
        ct = f"{dt_c:13.4f}" if dt_c is not None else "          n/a"
        print(f"{n:>6} {len(edges):>8} {rank_p:>7} {dt_p:>10.4f} {ct} {speed}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
