"""
Time the numba and numpy paths of the hot kernels side by side.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Kernels: batched signed log-determinant of the correlation-matrix minors
used by thermal scans, and the conditional-entropy grid behind the
brute-force discord.  Each numba kernel is called once before timing so
compilation is excluded.
"""

import argparse
import timeit

import numpy as np

from xyfreeze import _kernels
from xyfreeze.chain import ChainSpec, build_quadratic_form
from xyfreeze.correlators import two_site_density_matrix, pair_correlators
from xyfreeze.fermions import correlation_matrix, correlation_stack, diagonalize


def _minor_stack(n, n_temps):
    spec = ChainSpec.weak_end(n, 0.1, 0.2)
    spectrum = diagonalize(build_quadratic_form(spec))
    g = correlation_stack(spectrum, 1.0 / np.linspace(1e-5, 3e-3, n_temps))
    return np.ascontiguousarray(g[:, : n - 1, 1:])


def _bench(label, fn, repeat):
    t = min(timeit.repeat(fn, number=1, repeat=repeat))
    print(f"  {label:<8s} {t * 1e3:10.3f} ms")
    return t


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[1])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        print("numba unavailable; only the numpy path can run")

    for n, nt in ((20, 300), (50, 300), (50, 1500)):
        stack = _minor_stack(n, nt)
        print(f"slogdet: {nt} minors of size {n - 1}")
        a = _kernels.slogdet_numpy(stack)
        t_np = _bench("numpy", lambda: _kernels.slogdet_numpy(stack), args.repeat)
        if _kernels.HAVE_NUMBA:
            b = _kernels.slogdet_numba(stack)
            assert np.array_equal(a[0], b[0]) and np.allclose(a[1], b[1], atol=1e-9)
            t_nb = _bench("numba", lambda: _kernels.slogdet_numba(stack), args.repeat)
            print(f"  speedup  {t_np / t_nb:10.2f}x")

    corr = correlation_matrix(diagonalize(build_quadratic_form(ChainSpec.weak_end(8, 0.3, 0.2))))
    rho = two_site_density_matrix(pair_correlators(corr, 0, 7)).astype(complex)
    for nth, nph in ((101, 200), (201, 400)):
        th = np.linspace(0, np.pi / 2, nth)
        ph = np.linspace(0, 2 * np.pi, nph, endpoint=False)
        print(f"conditional entropy grid: {nth} x {nph}")
        a = _kernels.conditional_entropy_grid_numpy(rho, th, ph)
        t_np = _bench("numpy", lambda: _kernels.conditional_entropy_grid_numpy(rho, th, ph),
                      args.repeat)
        if _kernels.HAVE_NUMBA:
            b = _kernels.conditional_entropy_grid_numba(rho, th, ph)
            assert np.allclose(a, b, atol=1e-12)
            t_nb = _bench("numba", lambda: _kernels.conditional_entropy_grid_numba(rho, th, ph),
                          args.repeat)
            print(f"  speedup  {t_np / t_nb:10.2f}x")


if __name__ == "__main__":
    main()
