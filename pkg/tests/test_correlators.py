import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xyfreeze import oracle
from xyfreeze.chain import ChainSpec, build_quadratic_form
from xyfreeze.correlators import (InconsistentCorrelatorsError, SingularCouplingError,
                                  TwoSiteCorrelators, bell_eigenvalues, bell_state, det_sign,
                                  end_to_end_correlators, minor_correlators, pair_correlators,
                                  two_site_density_matrix)
from xyfreeze.fermions import CorrelationMatrix, correlation_matrix, diagonalize
from xyfreeze.freezing import evaluate

lam = st.floats(min_value=1e-3, max_value=1.0)


def _ground(spec):
    qf = build_quadratic_form(spec)
    return qf, correlation_matrix(diagonalize(qf), spec.beta)


def _leibniz(m):
    n = m.shape[0]
    total = 0.0
    for perm in itertools.permutations(range(n)):
        inv = sum(perm[a] > perm[b] for a in range(n) for b in range(a + 1, n))
        total += (-1) ** inv * np.prod([m[r, perm[r]] for r in range(n)])
    return total


def test_det_sign_against_leibniz(rng):
    for _ in range(25):
        m = rng.standard_normal((6, 6))
        assert det_sign(m) == np.sign(_leibniz(m))


def test_det_sign_singular():
    assert det_sign(np.zeros((3, 3))) == 0.0


def test_nearest_neighbour_minors():
    _, corr = _ground(ChainSpec.weak_end(9, 0.3, 0.7, gamma=0.2))
    g = corr.g
    for i in range(8):
        t = pair_correlators(corr, i, i + 1)
        assert t.txx == pytest.approx(0.25 * g[i, i + 1], abs=1e-15)
        # +1/4 G[i+1, i]; the oracle below fixes this sign
        assert t.tyy == pytest.approx(0.25 * g[i + 1, i], abs=1e-15)
        assert t.tzz == pytest.approx(-0.25 * g[i, i + 1] * g[i + 1, i], abs=1e-12)


def test_nearest_neighbour_sign_against_oracle():
    spec = ChainSpec.weak_end(6, 0.4, 0.9, gamma=0.3)
    _, corr = _ground(spec)
    state = oracle.exact_ground_state(spec)
    for i in range(5):
        ref = oracle.correlators_from_state(oracle.reduced_state(state, i, i + 1))
        assert pair_correlators(corr, i, i + 1).as_array() == pytest.approx(ref, abs=1e-10)


def test_zero_matrix_gives_zero():
    t = pair_correlators(CorrelationMatrix(np.zeros((6, 6)), 1.0), 1, 4)
    assert (t.txx, t.tyy, t.tzz) == (0.0, 0.0, 0.0)


@pytest.mark.parametrize("i,j", [(0, 0), (3, 2), (-1, 3), (0, 6)])
def test_bad_pairs(i, j):
    _, corr = _ground(ChainSpec.weak_end(6, 0.3, 0.2))
    with pytest.raises(IndexError):
        pair_correlators(corr, i, j)


def test_end_to_end_against_minors_reference_case():
    qf, corr = _ground(ChainSpec.weak_end(10, 0.3, 0.2))
    a = end_to_end_correlators(corr, qf).as_array()
    b = pair_correlators(corr, 0, 9).as_array()
    assert np.abs(a - b).max() < 1e-9


@settings(max_examples=80, deadline=None)
@given(n=st.integers(3, 40), l1=lam, l2=lam, g=st.floats(-0.6, 0.6))
def test_end_to_end_against_minors(n, l1, l2, g):
    qf, corr = _ground(ChainSpec.weak_end(n, l1, l2, gamma=g))
    try:
        a = end_to_end_correlators(corr, qf).as_array()
    except SingularCouplingError:
        return
    assert np.abs(a - pair_correlators(corr, 0, n - 1).as_array()).max() < 1e-9


def test_end_to_end_refuses_thermal():
    spec = ChainSpec.weak_end(8, 0.3, 0.2, beta=10.0)
    qf, corr = _ground(spec)
    with pytest.raises(ValueError):
        end_to_end_correlators(corr, qf)


def test_end_to_end_refuses_gapless():
    # odd XX chain: det(a - b) = 0
    qf, corr = _ground(ChainSpec.uniform(5, 1.0, 1.0))
    with pytest.raises(SingularCouplingError):
        end_to_end_correlators(corr, qf)


@pytest.mark.parametrize("beta", [math.inf, 4.0])
def test_all_pairs_against_oracle(beta):
    spec = ChainSpec.weak_end(8, 0.35, 0.15, gamma=0.1, beta=beta)
    _, corr = _ground(spec)
    state = oracle.exact_thermal_state(spec, beta)
    for i in range(8):
        for j in range(i + 1, 8):
            rho = oracle.reduced_state(state, i, j)
            t = pair_correlators(corr, i, j)
            assert t.as_array() == pytest.approx(oracle.correlators_from_state(rho), abs=1e-10)
    rho = oracle.reduced_state(state, 0, 7)
    e = np.sort(bell_state(pair_correlators(corr, 0, 7)).as_array())
    assert e == pytest.approx(np.sort(np.linalg.eigvalsh(rho)), abs=1e-10)
    assert np.abs(two_site_density_matrix(pair_correlators(corr, 0, 7)) - rho).max() < 1e-10


def test_bell_singlet_and_mixed():
    assert bell_eigenvalues(-0.25, -0.25, -0.25) == pytest.approx([1, 0, 0, 0])
    assert bell_eigenvalues(0, 0, 0) == pytest.approx([0.25] * 4)


def test_bell_rejects_unphysical():
    with pytest.raises(InconsistentCorrelatorsError):
        bell_state(TwoSiteCorrelators(0.25, 0.25, 0.25, (0, 1)))


def test_bell_clamps_round_off():
    e = bell_eigenvalues(-0.25 - 1e-13, -0.25, -0.25)
    assert e.min() >= 0.0


@settings(max_examples=40, deadline=None)
@given(n=st.integers(4, 30), l1=lam, l2=lam)
def test_bell_eigenvalues_physical(n, l1, l2):
    t = evaluate(ChainSpec.weak_end(n, l1, l2)).correlators
    assert max(abs(t.txx), abs(t.tyy), abs(t.tzz)) <= 0.25 + 1e-12
    e = bell_state(t).as_array()
    assert abs(e.sum() - 1) < 1e-10 and e.min() >= 0


def test_txx_constant_along_sweep():
    txx = []
    for l1 in np.arange(0.005, 1.0001, 0.005):
        qf, corr = _ground(ChainSpec.weak_end(20, float(l1), 0.2))
        txx.append(end_to_end_correlators(corr, qf).txx)
    assert np.std(txx, ddof=1) < 1e-8


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 20).map(lambda k: 2 * k), l1=lam, l2=lam)
def test_true_magnitude_ordering(n, l1, l2):
    # gapped ground state: tzz = -4 txx tyy, and |t| <= 1/4 then forces
    # |tzz| <= min(|txx|, |tyy|)
    t = evaluate(ChainSpec.weak_end(n, l1, l2)).correlators
    ax, ay, az = abs(t.txx), abs(t.tyy), abs(t.tzz)
    assert t.tzz == pytest.approx(-4 * t.txx * t.tyy, abs=1e-12)
    assert az <= min(ax, ay) + 1e-14
    if l1 < l2:
        assert ay >= ax - 1e-14
    elif l1 > l2:
        assert ax >= ay - 1e-14


def test_minor_stack_matches_single():
    spec = ChainSpec.weak_end(7, 0.2, 0.5)
    qf = build_quadratic_form(spec)
    sp = diagonalize(qf)
    gs = np.stack([correlation_matrix(sp, b).g for b in (1.0, 5.0, math.inf)])
    stacked = np.array(minor_correlators(gs, 1, 5))
    for k in range(3):
        assert stacked[:, k] == pytest.approx(minor_correlators(gs[k], 1, 5), abs=1e-15)
