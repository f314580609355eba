"""Time the compiled GF(p) kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3] [--quick]

Each workload runs on both backends, the results are compared for equality,
and the best-of-N wall time is reported.
"""

import argparse
import random
import sys
import time

from simortho import _accel, _pykernels


def _random_rows(rng, n, m, p):
    return [[rng.randrange(p) for _ in range(m)] for _ in range(n)]


def _sym(rng, n, p):
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            g[i][j] = g[j][i] = rng.randrange(p)
    return g


def workloads(quick):
    rng = random.Random(0)
    count = 200 if quick else 2000
    mats = [(_random_rows(rng, 12, 12, 10007), 12, 10007) for _ in range(count)]
    yield "rref 12x12 mod 10007", "rref_mod_p", [(m, n, p) for m, n, p in mats]
    yield "det 12x12 mod 10007", "det_mod_p", [(m, p) for m, _n, p in mats]
    # hyperbolic plane: no diagonalizing congruence exists, so the search is exhaustive
    yield "search GL(2,2) x 500", "congruence_search", [([[[0, 1], [1, 0]]], 2, 2)] * 500
    yield "search GL(3,3) x 5", "congruence_search", \
        [([_sym(rng, 3, 3), _sym(rng, 3, 3)], 3, 3) for _ in range(5)]
    if not quick:
        yield "search GL(3,5) no solution", "congruence_search", \
            [([[[1, 0, 0], [0, 1, 0], [0, 0, 1]], [[0, 1, 1], [1, 0, 1], [1, 1, 4]],
               [[0, 0, 1], [0, 1, 0], [1, 0, 0]]], 3, 5)]


def best_of(fn, calls, repeat):
    best, result = None, None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = [fn(*args) for args in calls]
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, result


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller workloads")
    args = ap.parse_args(argv)
    compiled = _accel._ckernels
    if compiled is None:
        print("compiled extension not available; only the Python fallback can run")
        return 1
    print(f"{'workload':32s} {'compiled':>10s} {'python':>10s} {'speedup':>8s}")
    for name, fn_name, calls in workloads(args.quick):
        tc, rc = best_of(getattr(compiled, fn_name), calls, args.repeat)
        tp, rp = best_of(getattr(_pykernels, fn_name), calls, 1 if not args.quick else args.repeat)
        norm = lambda rs: [(list(map(list, r[0])), list(r[1])) if fn_name == "rref_mod_p" else r
                           for r in rs]
        if norm(rc) != norm(rp):
            print(f"{name}: backends disagree", file=sys.stderr)
            return 2
        print(f"{name:32s} {tc:9.3f}s {tp:9.3f}s {tp / tc:7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
