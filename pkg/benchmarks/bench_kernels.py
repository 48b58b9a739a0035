"""Compare the numba-compiled kernels against the pure-numpy fallback.

Run twice, once per path:

    python benchmarks/bench_kernels.py
    ADELIC_HEIGHTS_NO_NUMBA=1 python benchmarks/bench_kernels.py

The kernel path is chosen at import time from the ADELIC_HEIGHTS_NO_NUMBA
environment variable, so the comparison needs two processes.  With no
arguments this script spawns both and prints a side-by-side table.
"""

import json
import math
import os
import subprocess
import sys
import time

import numpy as np


def bench_one_path():
    from adelic_heights._kernels import (USING_NUMBA, aberth_sweeps,
                                         mandel_aberth, pair_log_sum,
                                         periodic_aberth,
                                         quadratic_branch_step)

    results = {"numba": USING_NUMBA}

    def timeit(name, fn, repeat=3):
        fn()  # warm-up (includes JIT compilation for the numba path)
        best = math.inf
        for _ in range(repeat):
            t0 = time.perf_counter()
            fn()
            best = min(best, time.perf_counter() - t0)
        results[name] = best

    # polynomial root finding, degree 200
    rng = np.random.default_rng(0)
    coeffs = (rng.normal(size=201) + 1j * rng.normal(size=201))
    z0 = 1.5 * np.exp(2j * np.pi * (np.arange(200) + 0.25) / 200)
    timeit("aberth_deg200", lambda: aberth_sweeps(coeffs, z0, 200, 1e-12))

    # parameter-space cloud, depth 9 (degree 256)
    k = np.arange(256)
    zm = 1.1 * np.exp(2j * np.pi * (k + 0.25) / 256 + 0.3j)
    timeit("mandel_n9", lambda: mandel_aberth(2, 9, zm, 400, 1e-13))

    # periodic points of z^2 - 1, depth 8 (degree 256)
    pc = np.array([-1.0, 0.0, 1.0], dtype=np.complex128)
    zp = 2.1 * np.exp(2j * np.pi * (k + 0.25) / 256 + 0.3j)
    timeit("periodic_n8", lambda: periodic_aberth(pc, 8, zp, 400, 1e-13))

    # pairwise log-distance sum over 3000 points
    cloud = rng.normal(size=3000) + 1j * rng.normal(size=3000)
    timeit("pair_log_sum_3000", lambda: pair_log_sum(cloud))

    # quadratic inverse branch over 200k samples
    n = 200000
    a = rng.normal(size=n) + 1j * rng.normal(size=n)
    b = rng.normal(size=n) + 1j * rng.normal(size=n)
    c = rng.normal(size=n) + 1j * rng.normal(size=n)
    bits = rng.integers(0, 2, n).astype(bool)
    timeit("quad_branch_200k", lambda: quadratic_branch_step(a, b, c, bits))

    return results


def main():
    if len(sys.argv) > 1 and sys.argv[1] == "--one":
        print(json.dumps(bench_one_path()))
        return

    rows = {}
    for flag in ("0", "1"):
        env = dict(os.environ, ADELIC_HEIGHTS_NO_NUMBA=flag)
        out = subprocess.run([sys.executable, __file__, "--one"], env=env,
                             capture_output=True, text=True, check=True)
        res = json.loads(out.stdout.strip().splitlines()[-1])
        rows["numba" if res.pop("numba") else "numpy"] = res

    if "numba" not in rows:
        print("numba unavailable; numpy path only:")
        for k, v in rows["numpy"].items():
            print(f"  {k:20s} {v * 1e3:9.2f} ms")
        return

    print(f"{'kernel':22s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}")
    for k in rows["numba"]:
        tn, tp = rows["numba"][k], rows["numpy"][k]
        print(f"{k:22s} {tn * 1e3:8.2f}ms {tp * 1e3:8.2f}ms "
              f"{tp / tn:7.1f}x")


if __name__ == "__main__":
    main()
