"""Compare the numba kernels against their numpy fallbacks.

Usage:
    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --repeat 10 --json results.json
"""

import argparse
import json
import math
import time

import numpy as np

from quadzeta import _kernels as K
from quadzeta.arith import chi_table
from quadzeta.lfunc import _bern


def timeit(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases():
    D = 8 * 1195
    chi = chi_table(D, D)
    bern = _bern()
    xi = np.linspace(0.01, 40.0, 200000)
    c, h = 1.0, 0.05
    w = c + 1j * h * np.arange(400)
    from scipy.special import loggamma
    G = np.exp(2 * (loggamma(w / 2 + 0.25) - loggamma(0.25))) / w
    G[0] *= 0.5
    lnxi = np.log(xi)
    return [
        ("kronecker_table d=9560", lambda: K.kronecker_table_nb(D, D), lambda: K.kronecker_table_np(D, D)),
        ("l_series_em s=1/2 q=9560", lambda: K.l_series_em_nb(chi, 0.5, 8, bern),
         lambda: K.l_series_em_np(chi, 0.5, 8, bern)),
        ("w2_sum 2e5 points", lambda: K.w2_sum_nb(lnxi, G.real.copy(), G.imag.copy(), c, h),
         lambda: K.w2_sum_np(lnxi, G.real.copy(), G.imag.copy(), c, h)),
        ("twisted_sum X=300", lambda: K.twisted_sum_nb(chi, 0.75, 9e4, 4_000_000),
         lambda: K.twisted_sum_np(chi, 0.75, 9e4, 4_000_000)),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", help="write results to this file")
    args = ap.parse_args()
    if not K.NUMBA_AVAILABLE:
        print("numba is disabled; the numba column runs as plain python")
    rows = []
    for name, nb, npf in cases():
        nb()    # compile
        t_nb, v_nb = timeit(nb, args.repeat)
        t_np, v_np = timeit(npf, args.repeat)
        diff = float(np.max(np.abs(np.asarray(v_nb, dtype=np.complex128).ravel()[:1000]
                                   - np.asarray(v_np, dtype=np.complex128).ravel()[:1000])))
        rows.append({"kernel": name, "numba_s": t_nb, "numpy_s": t_np,
                     "speedup": t_np / t_nb, "max_abs_diff": diff})
        print(f"{name:28s} numba {t_nb * 1e3:9.3f} ms  numpy {t_np * 1e3:9.3f} ms  "
              f"x{t_np / t_nb:6.1f}  diff {diff:.1e}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
