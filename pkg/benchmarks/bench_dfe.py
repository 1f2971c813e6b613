"""Time the compiled equalizer kernel against the pure-Python fallback.

Both kernels run the identical decision-feedback loop on the same
received stream and starting taps, so the outputs must agree exactly;
the point of the compiled path is removing per-symbol interpreter
overhead from the sequential loop.

Usage: python3 benchmarks/bench_dfe.py [n_symbols]
"""

import sys
import time

import numpy as np

from hydrolink._kernels._dfe_py import dfe_run as dfe_run_py

try:
    from hydrolink._kernels._dfe_cy import dfe_run as dfe_run_cy
except ImportError:
    dfe_run_cy = None


def make_workload(n_sym: int, seed: int = 7):
    rng = np.random.default_rng(seed)
    h = np.array([0.9, 0.4 - 0.2j, 0.15j])
    symbols = (2.0 * rng.integers(0, 2, size=n_sym) - 1.0).astype(np.float64)
    x = np.convolve(symbols.astype(complex), h)[: n_sym + 2]
    x += 0.05 * (rng.standard_normal(x.size) + 1j * rng.standard_normal(x.size))
    ff0 = np.zeros(12, dtype=np.complex128)
    ff0[2] = 1.0
    fb0 = np.zeros(8, dtype=np.complex128)
    return x, symbols, ff0, fb0


def run_once(kernel, x, symbols, ff0, fb0):
    ff = ff0.copy()
    fb = fb0.copy()
    t0 = time.perf_counter()
    decisions, err2 = kernel(x, symbols, symbols.size // 2, ff, fb, 0.005, 2)
    return time.perf_counter() - t0, decisions, err2


def main() -> int:
    n_sym = int(sys.argv[1]) if len(sys.argv) > 1 else 200_000
    x, symbols, ff0, fb0 = make_workload(n_sym)

    runs_py = [run_once(dfe_run_py, x, symbols, ff0, fb0) for _ in range(3)]
    t_py = min(t for t, _, _ in runs_py)
    print(f"python kernel : {t_py:.3f} s  ({n_sym / t_py / 1e3:.0f} ksym/s)")

    if dfe_run_cy is None:
        print("cython kernel : not built (pip install -e . rebuilds it)")
        return 1

    runs_cy = [run_once(dfe_run_cy, x, symbols, ff0, fb0) for _ in range(3)]
    t_cy = min(t for t, _, _ in runs_cy)
    print(f"cython kernel : {t_cy:.3f} s  ({n_sym / t_cy / 1e3:.0f} ksym/s)")

    _, dec_py, err_py = runs_py[0]
    _, dec_cy, err_cy = runs_cy[0]
    same = np.array_equal(dec_py, dec_cy) and np.allclose(err_py, err_cy, rtol=1e-12)
    print(f"outputs agree : {same}")
    print(f"speedup       : {t_py / t_cy:.1f}x")
    return 0 if same else 1


if __name__ == "__main__":
    sys.exit(main())
