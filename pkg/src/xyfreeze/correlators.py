"""
Two-site spin correlators from the fermion correlation matrix.

Correlators are quarter-scaled, ``T^aa = <s^a_i s^a_j> / 4``, so the two-site
reduced state is ``rho = I/4 + sum_a T^aa s^a (x) s^a``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .chain import QuadraticForm
from .fermions import CorrelationMatrix

#: Slack allowed on Bell-diagonal eigenvalues before they are treated as
#: inconsistent rather than round-off.
EIGEN_SLACK = 1e-12


class SingularCouplingError(ValueError):
    """``det(a - b) == 0``: the instance is exactly gapless."""


class InconsistentCorrelatorsError(ValueError):
    pass


@dataclass(frozen=True)
class TwoSiteCorrelators:
    txx: float
    tyy: float
    tzz: float
    sites: tuple = (0, 1)

    def as_array(self) -> np.ndarray:
        return np.array([self.txx, self.tyy, self.tzz])


@dataclass(frozen=True)
class BellDiagonalState:
    e1: float
    e2: float
    e3: float
    e4: float

    def as_array(self) -> np.ndarray:
        return np.array([self.e1, self.e2, self.e3, self.e4])


def _check_pair(n, i, j):
    if not (0 <= i < j < n):
        raise IndexError(f"need 0 <= i < j < {n}, got ({i}, {j})")


def minor_correlators(g, i: int, j: int):
    """``(txx, tyy, tzz)`` for sites ``i < j`` from one matrix or a stack.

    ``txx`` is a quarter of the determinant of rows ``i..j-1`` and columns
    ``i+1..j``; ``tyy`` uses rows ``i+1..j`` and columns ``i..j-1``.
    """
    g = np.asarray(g)
    txx = 0.25 * _kernels.det(g[..., i:j, i + 1:j + 1])
    tyy = 0.25 * _kernels.det(g[..., i + 1:j + 1, i:j])
    tzz = 0.25 * (g[..., i, i] * g[..., j, j] - g[..., i, j] * g[..., j, i])
    return txx, tyy, tzz


def pair_correlators(corr: CorrelationMatrix, i: int, j: int) -> TwoSiteCorrelators:
    g = corr.g
    _check_pair(g.shape[0], i, j)
    txx, tyy, tzz = minor_correlators(g, i, j)
    return TwoSiteCorrelators(float(txx), float(tyy), float(tzz), (i, j))


def det_sign(m: np.ndarray) -> float:
    """Sign of ``det(m)`` from the pivots of an LU factorisation."""
    sign, _ = _kernels.slogdet(np.asarray(m, dtype=float))
    return float(sign)


def end_to_end_correlators(corr: CorrelationMatrix, qf: QuadraticForm) -> TwoSiteCorrelators:
    """Correlators of the two end spins without any large determinant.

    For a ground-state ``G`` (an orthogonal matrix) the ``(N-1) x (N-1)``
    minors reduce to cofactors:

        txx = -G[N-1, 0] * s / 4,  tyy = -G[0, N-1] * s / 4,  s = sign det(a - b)

    Only valid at zero temperature; thermal ``G`` is not orthogonal.
    """
    if not corr.is_ground:
        raise ValueError("the end-to-end shortcut needs the ground-state correlation matrix")
    g = corr.g
    n = g.shape[0]
    if n < 2:
        raise IndexError("need at least two sites")
    s = det_sign(np.asarray(qf.a) - np.asarray(qf.b))
    if s == 0:
        raise SingularCouplingError(
            "det(a - b) vanishes: gapless instance, perturb the couplings")
    last = n - 1
    txx = -0.25 * s * g[last, 0]
    tyy = -0.25 * s * g[0, last]
    tzz = 0.25 * (g[0, 0] * g[last, last] - g[0, last] * g[last, 0])
    return TwoSiteCorrelators(float(txx), float(tyy), float(tzz), (0, last))


def bell_eigenvalues(txx, tyy, tzz) -> np.ndarray:
    """Eigenvalues of ``I/4 + sum T s(x)s``, stacked on the last axis."""
    txx, tyy, tzz = np.broadcast_arrays(*(np.asarray(t, dtype=float) for t in (txx, tyy, tzz)))
    e = np.stack([
        0.25 - txx - tyy - tzz,
        0.25 - txx + tyy + tzz,
        0.25 + txx - tyy + tzz,
        0.25 + txx + tyy - tzz,
    ], axis=-1)
    if np.any(e < -EIGEN_SLACK) or np.any(e > 1 + EIGEN_SLACK):
        raise InconsistentCorrelatorsError(
            f"Bell-diagonal eigenvalues leave [0, 1] beyond {EIGEN_SLACK}: {e.min()}, {e.max()}")
    return np.clip(e, 0.0, 1.0)


def bell_state(t: TwoSiteCorrelators) -> BellDiagonalState:
    e = bell_eigenvalues(t.txx, t.tyy, t.tzz)
    return BellDiagonalState(*(float(x) for x in e))


def two_site_density_matrix(t: TwoSiteCorrelators) -> np.ndarray:
    """Dense 4x4 state in the computational basis |00>, |01>, |10>, |11>."""
    rho = np.zeros((4, 4))
    rho[0, 0] = rho[3, 3] = 0.25 + t.tzz
    rho[1, 1] = rho[2, 2] = 0.25 - t.tzz
    rho[0, 3] = rho[3, 0] = t.txx - t.tyy
    rho[1, 2] = rho[2, 1] = t.txx + t.tyy
    return rho
