import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import ortho_group

from xyfreeze import oracle
from xyfreeze.chain import ChainSpec, QuadraticForm, build_quadratic_form
from xyfreeze.fermions import (FermionSpectrum, SolverError, balanced_dispersion_residual,
                               correlation_matrix, correlation_stack, diagonalize, energy_gap)

lam = st.floats(min_value=1e-3, max_value=1.0)


def _spectrum(spec):
    return diagonalize(build_quadratic_form(spec))


def test_single_bond():
    sp = _spectrum(ChainSpec.uniform(2, 1.0, 1.0))
    assert np.allclose(sp.energies, [0.5, 0.5], atol=1e-15)
    assert energy_gap(sp) == pytest.approx(0.5, abs=1e-15)


@settings(max_examples=50, deadline=None)
@given(n=st.integers(3, 40), l1=lam, l2=lam, g=st.floats(-0.9, 0.9))
def test_orthonormal_and_reconstruction(n, l1, l2, g):
    qf = build_quadratic_form(ChainSpec.weak_end(n, l1, l2, gamma=g))
    sp = diagonalize(qf)
    eye = np.eye(n)
    assert np.abs(sp.phi @ sp.phi.T - eye).max() < 1e-10
    assert np.abs(sp.psi @ sp.psi.T - eye).max() < 1e-10
    recon = np.einsum("k,ki,kj->ij", sp.energies, sp.psi, sp.phi)
    assert np.abs(recon - (qf.a + qf.b)).max() < 1e-10
    assert np.all(sp.energies >= 0) and np.all(np.diff(sp.energies) >= 0)


def test_zero_modes_handled():
    # odd XX chain has an exact zero mode; the SVD still completes both bases
    sp = _spectrum(ChainSpec.uniform(7, 1.0, 1.0))
    assert sp.energies[0] < 1e-14
    assert np.abs(sp.psi @ sp.psi.T - np.eye(7)).max() < 1e-10


def test_non_finite_input_fails_cleanly():
    a = np.zeros((3, 3))
    a[0, 1] = a[1, 0] = np.nan
    with pytest.raises(SolverError):
        diagonalize(QuadraticForm(a, np.zeros((3, 3))))


def test_joint_sign_flip_leaves_g_invariant(rng):
    sp = _spectrum(ChainSpec.weak_end(9, 0.3, 0.6, gamma=0.2))
    flips = rng.choice([-1.0, 1.0], size=9)[:, None]
    flipped = FermionSpectrum(sp.energies, sp.phi * flips, sp.psi * flips)
    for beta in (math.inf, 3.0):
        assert np.abs(correlation_matrix(sp, beta).g
                      - correlation_matrix(flipped, beta).g).max() < 1e-14


def test_degenerate_rotation_leaves_g_invariant(rng):
    # the uniform XX ring has doubly degenerate modes
    sp = _spectrum(ChainSpec.uniform(8, 1.0, 1.0, boundary="closed"))
    e = sp.energies
    blocks = np.split(np.arange(8), np.nonzero(np.diff(e) > 1e-10)[0] + 1)
    assert any(len(b) > 1 for b in blocks)
    phi, psi = sp.phi.copy(), sp.psi.copy()
    for b in blocks:
        if len(b) > 1:
            r = ortho_group.rvs(len(b), random_state=rng)
            phi[b] = r @ phi[b]
            psi[b] = r @ psi[b]
    rotated = FermionSpectrum(e, phi, psi)
    for beta in (math.inf, 2.0):
        assert np.abs(correlation_matrix(sp, beta).g
                      - correlation_matrix(rotated, beta).g).max() < 1e-12


def test_ground_is_minus_psi_t_phi():
    sp = _spectrum(ChainSpec.weak_end(10, 0.4, 0.2))
    g = correlation_matrix(sp).g
    assert np.array_equal(g, -sp.psi.T @ sp.phi)
    assert np.abs(g).max() <= 1 + 1e-12
    assert np.abs(np.diag(g)).max() < 1e-10


def test_high_temperature_kills_correlations():
    sp = _spectrum(ChainSpec.weak_end(10, 0.4, 0.2))
    assert np.abs(correlation_matrix(sp, 1e-12).g).max() < 1e-11


def test_correlation_stack_matches_single():
    sp = _spectrum(ChainSpec.weak_end(12, 0.1, 0.3))
    betas = [0.5, 7.0, math.inf]
    stack = correlation_stack(sp, betas)
    for k, b in enumerate(betas):
        assert np.abs(stack[k] - correlation_matrix(sp, b).g).max() < 1e-14


def test_thermal_approaches_ground_monotonically():
    sp = _spectrum(ChainSpec.weak_end(10, 0.3, 0.2, gamma=0.1))
    ground = np.abs(correlation_matrix(sp).g)
    mags = np.array([np.abs(correlation_matrix(sp, b).g)
                     for b in np.geomspace(0.01, 1e4, 40)])
    # each mode weight tanh(beta E / 2) grows with beta, so the distance shrinks
    dist = np.abs(mags - ground).max(axis=(1, 2))
    assert np.all(np.diff(dist) <= 1e-12)
    assert dist[-1] < 1e-8


@pytest.mark.parametrize("beta", [0.0, -1.0])
def test_bad_beta(beta):
    with pytest.raises(ValueError):
        correlation_matrix(_spectrum(ChainSpec.uniform(3)), beta)


@pytest.mark.parametrize("n", [10, 20])
@pytest.mark.parametrize("lam_", [0.2, 0.5])
def test_balanced_dispersion(n, lam_):
    sp = _spectrum(ChainSpec.weak_end(n, lam_, lam_))
    for e in sp.energies:
        assert balanced_dispersion_residual(float(e), n, lam_) < 1e-8


@pytest.mark.parametrize("n,l1,l2,g", [(4, 0.3, 0.8, 0.0), (6, 0.9, 0.1, 0.3),
                                        (8, 0.5, 0.5, -0.2), (10, 0.05, 0.2, 0.0)])
def test_gap_matches_dense_spectrum(n, l1, l2, g):
    spec = ChainSpec.weak_end(n, l1, l2, gamma=g)
    assert abs(energy_gap(_spectrum(spec)) - oracle.exact_gap(spec)) < 1e-8


def test_gap_rises_then_freezes():
    grid = np.round(np.arange(0.005, 1.0001, 0.005), 12)
    gaps = np.array([energy_gap(_spectrum(ChainSpec.weak_end(20, l1, 0.2))) for l1 in grid])
    below, above = gaps[grid < 0.2], gaps[grid >= 0.2]
    assert np.all(np.diff(below) >= 0)
    assert np.ptp(above) < 1e-8


def test_gap_decreases_with_length():
    g20 = energy_gap(_spectrum(ChainSpec.weak_end(20, 0.5, 0.4)))
    g30 = energy_gap(_spectrum(ChainSpec.weak_end(30, 0.5, 0.4)))
    assert g30 < g20
