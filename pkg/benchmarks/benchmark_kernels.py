"""Timing comparison of the compiled kernels against the numpy fallback.

Run as `python benchmarks/benchmark_kernels.py`; pass --repeat to change
the averaging.  Both implementations are imported directly so a single
process can time the pair regardless of CURVECALC_BACKEND.
"""

import argparse
import timeit

import numpy as np

from curvecalc import _slowkernels

try:
    from curvecalc import _fastkernels
except ImportError:
    _fastkernels = None


def bench(label, fn_fast, fn_slow, repeat):
    t_slow = min(timeit.repeat(fn_slow, number=1, repeat=repeat))
    if fn_fast is None:
        print(f"{label:24s} numpy {t_slow * 1e3:8.3f} ms   (no compiled build)")
        return
    t_fast = min(timeit.repeat(fn_fast, number=1, repeat=repeat))
    print(
        f"{label:24s} numpy {t_slow * 1e3:8.3f} ms   compiled {t_fast * 1e3:8.3f} ms"
        f"   speedup {t_slow / t_fast:5.2f}x"
    )


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=7)
    ap.add_argument("--size", type=int, default=20000)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    n = args.size

    w = np.ascontiguousarray(rng.standard_normal(n) + 1j * rng.standard_normal(n))
    coeff = np.ascontiguousarray(rng.standard_normal(n) + 1j * rng.standard_normal(n))
    z = 5.0 + 5j
    bench(
        "cauchy_sum k=2",
        (lambda: _fastkernels.cauchy_sum(w, coeff, z, 2)) if _fastkernels else None,
        lambda: _slowkernels.cauchy_sum(w, coeff, z, 2),
        args.repeat,
    )

    verts = np.ascontiguousarray(np.cumsum(rng.standard_normal(n) + 1j * rng.standard_normal(n)))
    bench(
        "polyline_log_sum",
        (lambda: _fastkernels.polyline_log_sum(verts, 100.0 + 80j)) if _fastkernels else None,
        lambda: _slowkernels.polyline_log_sum(verts, 100.0 + 80j),
        args.repeat,
    )

    zeta = np.ascontiguousarray(rng.standard_normal(n) + 1j * rng.standard_normal(n))
    dzeta = np.ascontiguousarray(rng.standard_normal(n) + 1j * rng.standard_normal(n))
    dens = np.ascontiguousarray(rng.standard_normal(n) + 1j * rng.standard_normal(n))
    bench(
        "node_values k=3",
        (lambda: _fastkernels.node_values(zeta, dzeta, dens, 9.0 + 2j, 3)) if _fastkernels else None,
        lambda: _slowkernels.node_values(zeta, dzeta, dens, 9.0 + 2j, 3),
        args.repeat,
    )

    m, p = 4096, 64
    ts = np.sort(rng.uniform(0, 10, m))
    zt = np.ascontiguousarray(ts + 0.1j * np.sin(ts))
    tlo = np.sort(rng.uniform(0, 5, p))
    thi = np.ascontiguousarray(tlo + rng.uniform(1, 4, p))
    z1 = np.ascontiguousarray(rng.standard_normal(p) + 1j * rng.standard_normal(p))
    z2 = np.ascontiguousarray(z1 + 3.0 + rng.standard_normal(p))
    wt = np.ascontiguousarray(rng.standard_normal(p) + 0j)
    sgn = np.ascontiguousarray(rng.choice([-1.0, 1.0], p))
    bench(
        "xi_pair_sum",
        (lambda: _fastkernels.xi_pair_sum(ts, zt, z1, z2, wt, tlo, thi, sgn, 1, 2, 0.5))
        if _fastkernels
        else None,
        lambda: _slowkernels.xi_pair_sum(ts, zt, z1, z2, wt, tlo, thi, sgn, 1, 2, 0.5),
        args.repeat,
    )


if __name__ == "__main__":
    main()
