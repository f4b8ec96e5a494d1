"""Benchmark the TOPSIS closeness kernel: numba @njit vs pure numpy.

The scheduling hot path scores tiny matrices (a handful of nodes x 5
criteria) once per decision, so per-call overhead dominates; larger shapes
show where vectorized numpy catches up.

    python3 benchmarks/bench_topsis.py [--repeats 2000]

GREENPOD_PURE_NUMPY=1 would disable the numba backend entirely; run this
script without it to compare both.
"""

import argparse
import time

import numpy as np

from greenpod import kernels

SHAPES = [(4, 5), (16, 8), (64, 16), (256, 32)]


def _case(rng, n_alt, n_crit):
    values = np.ascontiguousarray(rng.uniform(0.0, 100.0, size=(n_alt, n_crit)))
    weights = rng.uniform(0.1, 1.0, size=n_crit)
    weights /= weights.sum()
    benefit = np.ascontiguousarray(rng.uniform(size=n_crit) < 0.5)
    return values, np.ascontiguousarray(weights), benefit


def _time_backend(backend, cases, repeats):
    previous = kernels.set_backend(backend)
    try:
        kernels.topsis_closeness(*cases[0])  # warm up (numba compiles here)
        started = time.perf_counter()
        for _ in range(repeats):
            for case in cases:
                kernels.topsis_closeness(*case)
        elapsed = time.perf_counter() - started
    finally:
        kernels.set_backend(previous)
    return elapsed / (repeats * len(cases))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=2000)
    parser.add_argument("--cases-per-shape", type=int, default=5)
    args = parser.parse_args()

    backends = ["numpy"]
    try:
        kernels.set_backend("numba")
        backends.insert(0, "numba")
    except ValueError:
        print("numba backend unavailable; timing numpy only")

    rng = np.random.default_rng(1)
    print(f"{'shape':>10s}" + "".join(f"{b + ' us/call':>16s}" for b in backends) +
          ("{:>12s}".format("speedup") if len(backends) == 2 else ""))
    for n_alt, n_crit in SHAPES:
        cases = [_case(rng, n_alt, n_crit) for _ in range(args.cases_per_shape)]
        per_call = [_time_backend(b, cases, args.repeats) for b in backends]
        row = f"{n_alt}x{n_crit:<6d}".rjust(10)
        row += "".join(f"{t * 1e6:>16.2f}" for t in per_call)
        if len(per_call) == 2:
            row += f"{per_call[1] / per_call[0]:>11.1f}x"
        print(row)

    # sanity: both paths agree on one case
    if len(backends) == 2:
        case = _case(rng, 6, 6)
        a = kernels._closeness_numba(*case)[3]
        b = kernels._closeness_numpy(*case)[3]
        assert np.allclose(a, b, atol=1e-12), "backends disagree"
        print("backends agree within 1e-12 on a spot check")


if __name__ == "__main__":
    main()
