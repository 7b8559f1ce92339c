"""Benchmark the compiled Newton kernel against the numpy fallback.

Run:  python benchmarks/bench_solver.py [--starts 2000]

Times the raw polish kernel (identical inputs for both backends) and the
full idempotent search on representative group-derived quantum groups.
"""

import argparse
import time

import numpy as np

from qgidem import builtin_group, function_algebra, group_algebra
from qgidem import _kernels
from qgidem.states import SolveConfig, _constraint_chart, _solver_starts, solve_idempotents


def time_kernel(qg, starts, backend):
    cfg = SolveConfig(starts=starts, seed=0)
    w_p, z = _constraint_chart(qg)
    t0 = _solver_starts(qg, cfg, z, w_p)
    d = np.ascontiguousarray(qg.comult)
    kern = _kernels.get_backend(backend)
    tic = time.perf_counter()
    _, res, ok = kern.newton_polish_batch(d, w_p, z, t0, 1e-13, cfg.max_iter)
    toc = time.perf_counter()
    return toc - tic, int(ok.sum())


def time_full(qg, starts, backend):
    cfg = SolveConfig(starts=starts, seed=0)
    tic = time.perf_counter()
    found = solve_idempotents(qg, cfg, backend=backend)
    toc = time.perf_counter()
    return toc - tic, len(found)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--starts", type=int, default=2000)
    args = parser.parse_args()

    if not _kernels.HAVE_COMPILED:
        print("compiled kernel not built; nothing to compare")
        return

    cases = [
        ("fn:S3", function_algebra(builtin_group("S3"))),
        ("ga:D4", group_algebra(builtin_group("D4"))),
        ("fn:Z12", function_algebra(builtin_group("Z12"))),
        ("ga:S4", group_algebra(builtin_group("S4"))),
    ]
    print(f"{args.starts} Newton starts per case\n")
    print(f"{'case':8s} {'kernel(C)':>10s} {'kernel(py)':>11s} {'speedup':>8s}"
          f" {'full(C)':>9s} {'full(py)':>9s}")
    for label, qg in cases:
        tc, okc = time_kernel(qg, args.starts, "compiled")
        tp, okp = time_kernel(qg, args.starts, "python")
        assert okc == okp, (okc, okp)
        fc, nc = time_full(qg, args.starts, "compiled")
        fp, np_ = time_full(qg, args.starts, "python")
        assert nc == np_, (nc, np_)
        print(f"{label:8s} {tc:9.3f}s {tp:10.3f}s {tp / tc:7.1f}x"
              f" {fc:8.3f}s {fp:8.3f}s   ({nc} idempotents)")


if __name__ == "__main__":
    main()
