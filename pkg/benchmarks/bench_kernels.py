#!/usr/bin/env python3
"""Compare the numba and numpy row reduction kernels over GF(p).

Both kernels are called directly, so the ``NOVIKOVLAB_NUMBA`` switch does not
matter here.  The last part times a whole field computation (cohomology
of fuzzed complexes over GF(p)) under whichever backend the switch selected.

    python3 benchmarks/bench_kernels.py
    NOVIKOVLAB_NUMBA=0 python3 benchmarks/bench_kernels.py
"""
import argparse
import time

import numpy as np

from novikovlab import _kernels
from novikovlab.fuzz import fuzz_generate
from novikovlab.complexes import cohomology_field
from novikovlab.rings import Fp


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def bench_rref(sizes, p, repeat, seed):
    rng = np.random.default_rng(seed)
    print(f"\n=== rref mod {p} (best of {repeat}) ===")
    print(f"{'shape':>12} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    _kernels.rref_mod_p_numba(np.eye(2, dtype=np.int64), p)  # compile outside the timing
    for n in sizes:
        a = rng.integers(0, p, size=(n, n + n // 2))
        r1, _, k1 = _kernels.rref_mod_p_numpy(a, p)
        r2, _, k2 = _kernels.rref_mod_p_numba(a, p)
        assert k1 == k2 and np.array_equal(r1, r2), "kernels disagree"
        t_np = best_of(lambda: _kernels.rref_mod_p_numpy(a, p), repeat)
        t_nb = best_of(lambda: _kernels.rref_mod_p_numba(a, p), repeat)
        print(f"{f'{n}x{n + n // 2}':>12} {t_np:10.5f} {t_nb:10.5f} {t_np / t_nb:7.1f}x")


def bench_pipeline(samples, rank, p, seed):
    backend = "numba" if _kernels.USE_NUMBA else "numpy"
    complexes = [fuzz_generate(seed + i, Fp(p), (-2, 2), rank, "any")[0] for i in range(samples)]
    print(f"\n=== cohomology of {samples} complexes over GF({p}), ranks <= {rank}, backend {backend} ===")
    cohomology_field(complexes[0])  # warm up
    start = time.perf_counter()
    for C in complexes:
        cohomology_field(C)
    print(f"total {time.perf_counter() - start:.3f}s")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 32, 128, 256])
    ap.add_argument("--prime", type=int, default=65521)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--samples", type=int, default=50)
    ap.add_argument("--rank", type=int, default=60)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    bench_rref(a.sizes, a.prime, a.repeat, a.seed)
    bench_pipeline(a.samples, a.rank, a.prime, a.seed)


if __name__ == "__main__":
    main()
