"""Compare the numba and pure-numpy screening kernels, and the exact MPFR path.

    python benchmarks/bench_kernel.py [N]
"""

import sys
import time

import numpy as np

from cospow import _kernels
from cospow.scanner import ScanConfig, scan_range


def timed(fn, *args, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 10**7
    ns = np.arange(1, n + 1, dtype=np.int64)

    # warm up JIT compilation
    _kernels.screen_values_numba(ns[:10], 1.0)

    t_np, v_np = timed(_kernels.screen_values_numpy, ns, 1.0)
    t_nb, v_nb = timed(_kernels.screen_values_numba, ns, 1.0)
    print(f"screen {n} indices  numpy: {t_np:.3f}s  numba: {t_nb:.3f}s  "
          f"speedup: {t_np / t_nb:.1f}x  max |diff|: {np.max(np.abs(v_np - v_nb)):.2e}")

    m = min(n, 20000)
    t_exact, _ = timed(scan_range, ScanConfig(1, m, 1.0), repeat=1)
    t_filt, hits = timed(scan_range, ScanConfig(1, n, 1.0, alpha=0.9), repeat=1)
    print(f"exact full scan of {m}: {t_exact:.3f}s ({t_exact / m * 1e6:.1f} us/index)")
    print(f"screened filtered scan of {n} (alpha=0.9, backend={_kernels.BACKEND}): "
          f"{t_filt:.3f}s, {len(hits)} hits")


if __name__ == "__main__":
    main()
