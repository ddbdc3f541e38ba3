"""Compare the compiled and pure-Python kernels on the two hot loops.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each backend gets fresh algebras (the rewriters memoise products), so the
numbers include cache warm-up the way a real build does.
"""

import argparse
import random
import time

from polycentral import _backend
from polycentral.builder import WeightSchedule, build_group_algebra
from polycentral.groups import heisenberg


def bench_multiplication(mod, cutoff, pairs):
    _backend.Rewriter = mod.Rewriter
    start = time.perf_counter()
    ga = build_group_algebra(heisenberg(2), WeightSchedule.from_generator_weights((1, 1, 3), (1, 2)), cutoff)
    rng = random.Random(0)
    alg = ga.algebra
    for _ in range(pairs):
        x, y = ga.pres.random_element(rng), ga.pres.random_element(rng)
        alg.mul(ga.embed(x), ga.embed(y))
    return time.perf_counter() - start


def bench_rref(mod, size, p, count):
    rng = random.Random(1)
    mats = [[[rng.randrange(p) for _ in range(size)] for _ in range(size)] for _ in range(count)]
    start = time.perf_counter()
    for m in mats:
        mod.rref(m, p)
    return time.perf_counter() - start


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = _backend.available_backends()
    saved = _backend.Rewriter
    cases = [
        ("heisenberg embed+mul, D=12, 300 pairs", lambda m: bench_multiplication(m, 12, 300)),
        ("heisenberg embed+mul, D=16, 100 pairs", lambda m: bench_multiplication(m, 16, 100)),
        ("rref 40x40 over F_3, 20 matrices", lambda m: bench_rref(m, 40, 3, 20)),
    ]
    print(f"{'case':45s}" + "".join(f"{name:>12s}" for name in sorted(backends)) + "     speedup")
    try:
        for label, fn in cases:
            best = {name: min(fn(mod) for _ in range(args.repeat)) for name, mod in sorted(backends.items())}
            row = f"{label:45s}" + "".join(f"{best[n]:11.3f}s" for n in sorted(best))
            if "cython" in best:
                row += f"  {best['python'] / best['cython']:9.2f}x"
            print(row)
    finally:
        _backend.Rewriter = saved


if __name__ == "__main__":
    main()
