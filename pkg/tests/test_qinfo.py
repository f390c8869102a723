import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xyfreeze import oracle
from xyfreeze.correlators import TwoSiteCorrelators, two_site_density_matrix
from xyfreeze.qinfo import (classical_correlation, concurrence, concurrence_gh,
                            measure_arrays, measures, mutual_information)

weights = st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=4, max_size=4).filter(
    lambda w: sum(w) > 1e-3)


def _from_eigenvalues(w):
    e1, e2, e3, e4 = np.asarray(w) / np.sum(w)
    return TwoSiteCorrelators((e3 + e4 - e1 - e2) / 4, (e2 + e4 - e1 - e3) / 4,
                              (e2 + e3 - e1 - e4) / 4, (0, 1))


def test_singlet():
    m = measures(TwoSiteCorrelators(-0.25, -0.25, -0.25, (0, 1)))
    assert (m.mutual_info, m.classical, m.discord, m.concurrence) == pytest.approx((2, 1, 1, 1))


def test_maximally_mixed():
    m = measures(TwoSiteCorrelators(0.0, 0.0, 0.0, (0, 1)))
    assert (m.mutual_info, m.classical, m.discord, m.concurrence) == (0.0, 0.0, 0.0, 0.0)


@settings(max_examples=30, deadline=None)
@given(w=weights)
def test_against_brute_force(w):
    t = _from_eigenvalues(w)
    rho = two_site_density_matrix(t)
    m = measures(t)
    assert m.mutual_info == pytest.approx(oracle.von_neumann_mutual_information(rho), abs=1e-10)
    assert abs(m.discord - oracle.brute_discord(rho)) < 1e-4
    assert abs(m.concurrence - oracle.wootters_concurrence(rho)) < 1e-10


@settings(max_examples=200, deadline=None)
@given(w=weights)
def test_measure_invariants(w):
    t = _from_eigenvalues(w)
    mi, cc, disc, conc = (float(x) for x in measure_arrays(t.txx, t.tyy, t.tzz))
    assert abs(disc - (mi - cc)) < 1e-12
    assert -1e-12 <= cc <= mi + 1e-12 <= 2 + 1e-12
    assert disc >= 0 and 0 <= conc <= 1 + 1e-12
    assert conc == pytest.approx(float(concurrence_gh(t.txx, t.tyy, t.tzz)), abs=1e-15)


@settings(max_examples=100, deadline=None)
@given(w=weights, perm=st.permutations([0, 1, 2]), signs=st.lists(
    st.sampled_from([-1.0, 1.0]), min_size=3, max_size=3))
def test_classical_depends_on_max_magnitude_only(w, perm, signs):
    t = _from_eigenvalues(w).as_array()
    other = np.array(signs) * np.abs(t)[list(perm)]
    assert classical_correlation(*t) == pytest.approx(classical_correlation(*other), abs=1e-14)


@settings(max_examples=100, deadline=None)
@given(w=weights)
def test_ppt_means_no_entanglement(w):
    t = _from_eigenvalues(w)
    rho = two_site_density_matrix(t)
    if oracle.partial_transpose_min_eigenvalue(rho) >= 0:
        assert concurrence(t.txx, t.tyy, t.tzz) == pytest.approx(0.0, abs=1e-12)
    else:
        assert concurrence(t.txx, t.tyy, t.tzz) > 0


def test_literal_g_plus_form_differs():
    # with g+ in both branches the formula misses states entangled along g-
    t = TwoSiteCorrelators(0.2, -0.2, 0.15, (0, 1))
    assert concurrence(t.txx, t.tyy, t.tzz) > 0
    literal = max(0.0, 2 * (abs(t.txx + t.tyy) - (0.25 - t.tzz)),
                  2 * (abs(t.txx + t.tyy) - (0.25 + t.tzz)))
    assert literal == 0.0


def test_vectorised_matches_scalar():
    ts = [_from_eigenvalues(w) for w in np.random.default_rng(1).random((20, 4))]
    arr = measure_arrays(*np.array([t.as_array() for t in ts]).T)
    for k, t in enumerate(ts):
        m = measures(t)
        assert (arr[0][k], arr[1][k], arr[2][k], arr[3][k]) == pytest.approx(
            (m.mutual_info, m.classical, m.discord, m.concurrence), abs=1e-15)


def test_mutual_information_zero_log_zero():
    assert float(mutual_information(-0.25, -0.25, -0.25)) == pytest.approx(2.0)
