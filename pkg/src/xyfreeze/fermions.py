"""
Free-fermion diagonalisation of the quadratic form.

The single-particle problem is solved as the singular value decomposition

    a + b = sum_k  energies[k] * outer(psi[k], phi[k])

so ``phi[k] (a - b)(a + b) = energies[k]**2 phi[k]`` and
``psi[k] = (a + b) phi[k] / energies[k]`` whenever the energy is nonzero.
The SVD stays well defined when an energy vanishes, where the explicit
division would not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chain import GROUND, QuadraticForm


class SolverError(RuntimeError):
    """Raised when the factorisation fails; no partial result is returned."""


@dataclass(frozen=True)
class FermionSpectrum:
    """Single-particle energies (ascending, >= 0) and the paired vector
    families, one vector per row."""

    energies: np.ndarray
    phi: np.ndarray
    psi: np.ndarray

    @property
    def n(self) -> int:
        return self.energies.shape[0]


@dataclass(frozen=True)
class CorrelationMatrix:
    """``g[i, j] = -sum_k psi[k, i] * tanh(beta * energies[k] / 2) * phi[k, j]``."""

    g: np.ndarray
    beta: float = GROUND

    @property
    def is_ground(self) -> bool:
        return math.isinf(self.beta)


def _fix_signs(phi, psi):
    # flip each (phi_k, psi_k) pair jointly so the largest |phi_k| entry is positive
    idx = np.argmax(np.abs(phi), axis=1)
    s = np.sign(phi[np.arange(phi.shape[0]), idx])
    s[s == 0] = 1.0
    return phi * s[:, None], psi * s[:, None]


def diagonalize(qf: QuadraticForm) -> FermionSpectrum:
    m = np.asarray(qf.a) + np.asarray(qf.b)
    if not np.all(np.isfinite(m)):
        raise SolverError("quadratic form contains non-finite entries")
    try:
        u, s, vt = np.linalg.svd(m)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"singular value decomposition did not converge: {exc}") from exc
    order = np.argsort(s, kind="stable")
    energies = s[order]
    phi = vt[order]
    psi = u[:, order].T
    phi, psi = _fix_signs(phi, psi)
    for arr in (energies, phi, psi):
        arr.setflags(write=False)
    return FermionSpectrum(energies, phi, psi)


def occupation_weights(energies: np.ndarray, beta) -> np.ndarray:
    """``tanh(beta * E / 2)``, broadcast over an array of ``beta``.

    Returns shape ``(len(beta), n)`` for array input and ``(n,)`` for a
    scalar.  The ground-state tag gives exactly 1 for every mode, including
    zero modes, to reproduce ``G = -psi^T phi``.
    """
    beta_arr = np.asarray(beta, dtype=float)
    e = np.asarray(energies, dtype=float)
    if np.any(beta_arr <= 0):
        raise ValueError("beta must be positive")
    w = np.tanh(0.5 * beta_arr[..., None] * e)
    w = np.where(np.isinf(beta_arr)[..., None], 1.0, w)
    return w


def correlation_matrix(spectrum: FermionSpectrum, beta: float = GROUND) -> CorrelationMatrix:
    if not (beta > 0):
        raise ValueError(f"beta must be positive, got {beta!r}")
    if math.isinf(beta):
        g = -spectrum.psi.T @ spectrum.phi
    else:
        w = occupation_weights(spectrum.energies, beta)
        g = -(spectrum.psi.T * w) @ spectrum.phi
    g.setflags(write=False)
    return CorrelationMatrix(g, float(beta))


def correlation_stack(spectrum: FermionSpectrum, betas) -> np.ndarray:
    """Correlation matrices for many temperatures at once, shape ``(nb, n, n)``."""
    w = occupation_weights(spectrum.energies, np.atleast_1d(betas))
    return -np.einsum("ki,bk,kj->bij", spectrum.psi, w, spectrum.phi, optimize=True)


def energy_gap(spectrum: FermionSpectrum) -> float:
    """Smallest single-particle excitation energy."""
    return float(spectrum.energies[0])


def balanced_dispersion_residual(energy: float, n_spins: int, lam: float) -> float:
    """Residual of the balanced weak-end eigenvalue condition at one energy.

    For ``lambda1 = lambda2 = lam`` and an XX bulk every single-particle energy
    is ``cos(k)`` with ``mu * cot(k) * cot((N - 1) k / 2)**mu = lam**2 / (2 - lam**2)``
    for parity ``mu = +1`` or ``-1``.  Returns the smaller residual over the
    two parities at ``k = arccos(energy)``.
    """
    k = math.acos(min(max(energy, -1.0), 1.0))
    rhs = lam * lam / (2.0 - lam * lam)
    cot_k = math.cos(k) / math.sin(k)
    half = 0.5 * (n_spins - 1) * k
    cot_half = math.cos(half) / math.sin(half)
    even = cot_k * cot_half
    odd = -cot_k / cot_half
    return min(abs(even - rhs), abs(odd - rhs))
