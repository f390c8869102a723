import os
import subprocess
import sys

import numpy as np
import pytest

from xyfreeze import _kernels

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")


@needs_numba
@pytest.mark.parametrize("n", [1, 3, 8, 30])
def test_slogdet_paths_agree(rng, n):
    stack = rng.standard_normal((50, n, n))
    s1, l1 = _kernels.slogdet_numpy(stack)
    s2, l2 = _kernels.slogdet_numba(stack)
    assert np.array_equal(s1, s2)
    assert np.allclose(l1, l2, atol=1e-10)


@needs_numba
def test_slogdet_singular_and_empty():
    s, la = _kernels.slogdet_numba(np.zeros((2, 3, 3)))
    assert np.all(s == 0) and np.all(np.isneginf(la))
    for fn in (_kernels.slogdet_numpy, _kernels.slogdet_numba):
        s, la = fn(np.zeros((4, 0, 0)))
        assert np.all(s == 1) and np.all(la == 0)


def test_det_single_matrix(rng):
    m = rng.standard_normal((5, 5))
    assert _kernels.det(m) == pytest.approx(np.linalg.det(m), rel=1e-12)


@needs_numba
def test_conditional_entropy_paths_agree(rng):
    m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    rho = m @ m.conj().T
    rho /= np.trace(rho)
    th = np.linspace(0, np.pi / 2, 17)
    ph = np.linspace(0, 2 * np.pi, 23, endpoint=False)
    a = _kernels.conditional_entropy_grid_numpy(rho, th, ph)
    b = _kernels.conditional_entropy_grid_numba(rho, th, ph)
    assert np.abs(a - b).max() < 1e-12


def test_pure_numpy_mode_runs_pipeline():
    code = ("from xyfreeze import _kernels, evaluate, ChainSpec\n"
            "assert not _kernels.USE_NUMBA\n"
            "p = evaluate(ChainSpec.weak_end(20, 0.1, 0.2))\n"
            "print(repr(p.measures.discord))\n")
    env = dict(os.environ, XYFREEZE_JIT="0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True).stdout
    from xyfreeze import ChainSpec, evaluate
    assert float(out) == pytest.approx(
        evaluate(ChainSpec.weak_end(20, 0.1, 0.2)).measures.discord, abs=1e-12)
