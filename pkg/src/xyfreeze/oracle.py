"""
Brute-force reference: dense 2^N diagonalisation, partial traces,
measurement-optimised discord and the Wootters concurrence.

Nothing here touches the fermion route, so it can arbitrate it.
"""

from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass
from functools import reduce
from typing import Optional

import numpy as np
from scipy import optimize

from . import _kernels
from .chain import ChainSpec

MAX_ORACLE_SPINS = 12

_SX = np.array([[0.0, 1.0], [1.0, 0.0]])
# sigma_y = i * _EPS, so sigma_y (x) sigma_y = -(_EPS (x) _EPS) is real
_EPS = np.array([[0.0, -1.0], [1.0, 0.0]])
_SY = np.array([[0.0, -1j], [1j, 0.0]])
_SZ = np.diag([1.0, -1.0])
_PAULI = {"x": _SX, "y": _SY, "z": _SZ}

# dense solves are memory heavy; by default they run one at a time
_SLOTS = threading.BoundedSemaphore(int(os.environ.get("XYFREEZE_ORACLE_SLOTS", "1")))


class OracleError(ValueError):
    pass


@dataclass(frozen=True)
class DenseState:
    """Either a pure state vector or a full density matrix on 2^N."""

    n_spins: int
    energies: np.ndarray
    vector: Optional[np.ndarray] = None
    rho: Optional[np.ndarray] = None
    degenerate: bool = False

    def density_matrix(self) -> np.ndarray:
        if self.rho is not None:
            return self.rho
        v = self.vector
        return np.outer(v, v.conj())


def _site_product(n, ops):
    # Kronecker product with ops[k] at site k and the identity elsewhere
    eye = np.eye(2)
    return reduce(np.kron, [ops.get(k, eye) for k in range(n)])


def dense_hamiltonian(spec: ChainSpec) -> np.ndarray:
    """Real 2^N x 2^N matrix of the spin Hamiltonian, built from Kronecker products."""
    n = spec.n_spins
    if n > MAX_ORACLE_SPINS:
        raise OracleError(f"dense oracle limited to {MAX_ORACLE_SPINS} spins, got {n}")
    jx, jy = spec.bond_couplings()
    dim = 2 ** n
    h = np.zeros((dim, dim))
    for bond in range(len(jx)):
        i, j = bond, (bond + 1) % n
        if jx[bond] != 0:
            h += 0.25 * jx[bond] * _site_product(n, {i: _SX, j: _SX})
        if jy[bond] != 0:
            h -= 0.25 * jy[bond] * _site_product(n, {i: _EPS, j: _EPS})
    return h


def exact_spectrum(spec: ChainSpec) -> np.ndarray:
    return np.linalg.eigvalsh(dense_hamiltonian(spec))


def exact_ground_state(spec: ChainSpec, degeneracy_tol: float = 1e-10) -> DenseState:
    with _SLOTS:
        w, v = np.linalg.eigh(dense_hamiltonian(spec))
    degenerate = bool(w.size > 1 and w[1] - w[0] < degeneracy_tol)
    return DenseState(spec.n_spins, w, vector=v[:, 0], degenerate=degenerate)


def exact_thermal_state(spec: ChainSpec, beta: float) -> DenseState:
    """Gibbs state at inverse temperature ``beta``; ``inf`` gives the ground state."""
    if math.isinf(beta):
        return exact_ground_state(spec)
    with _SLOTS:
        w, v = np.linalg.eigh(dense_hamiltonian(spec))
        p = np.exp(-beta * (w - w[0]))
        p /= p.sum()
        rho = (v * p) @ v.T
    return DenseState(spec.n_spins, w, rho=rho)


def exact_gap(spec: ChainSpec) -> float:
    w = exact_spectrum(spec)
    return float(w[1] - w[0])


def reduced_state(state: DenseState, i: int, j: int) -> np.ndarray:
    """Two-site reduced density matrix of sites ``i < j`` (basis |s_i s_j>)."""
    n = state.n_spins
    if not (0 <= i < n and 0 <= j < n and i != j):
        raise IndexError(f"sites ({i}, {j}) out of range for {n} spins")
    if state.vector is not None:
        psi = state.vector.reshape((2,) * n)
        psi = np.moveaxis(psi, (i, j), (0, 1)).reshape(4, -1)
        return psi @ psi.conj().T
    rho = state.rho.reshape((2,) * (2 * n))
    rest = [k for k in range(n) if k not in (i, j)]
    rho = np.moveaxis(rho, [i, j] + rest + [n + i, n + j] + [n + k for k in rest],
                      list(range(2 * n)))
    d = 2 ** len(rest)
    rho = rho.reshape(4, d, 4, d)
    return np.einsum("akbk->ab", rho)


def correlators_from_state(rho4: np.ndarray) -> tuple[float, float, float]:
    """Quarter-scaled ``<s^a s^a> / 4`` for a = x, y, z."""
    out = []
    for a in "xyz":
        s = _PAULI[a]
        out.append(float(np.real(np.trace(rho4 @ np.kron(s, s)))) / 4.0)
    return tuple(out)


def bell_diagonal_deviation(rho4: np.ndarray) -> float:
    """Largest violation of the Bell-diagonal X pattern in the computational basis."""
    r = np.asarray(rho4)
    mask = np.ones((4, 4), dtype=bool)
    for p in [(0, 0), (1, 1), (2, 2), (3, 3), (0, 3), (3, 0), (1, 2), (2, 1)]:
        mask[p] = False
    dev = [np.abs(r[mask]).max(),
           abs(r[0, 0] - r[3, 3]), abs(r[1, 1] - r[2, 2]),
           np.abs(np.imag(r)).max()]
    return float(max(dev))


def _entropy(rho) -> float:
    w = np.linalg.eigvalsh(rho)
    w = w[w > 1e-15]
    return float(-(w * np.log2(w)).sum())


def _partial_traces(rho4):
    r = rho4.reshape(2, 2, 2, 2)
    return np.einsum("abcb->ac", r), np.einsum("abad->bd", r)


def von_neumann_mutual_information(rho4: np.ndarray) -> float:
    ra, rb = _partial_traces(rho4)
    return _entropy(ra) + _entropy(rb) - _entropy(rho4)


def _cond_entropy_at(rho4, angles):
    th, ph = angles
    return float(_kernels.conditional_entropy_grid_numpy(rho4, [th], [ph])[0, 0])


def brute_classical_correlation(rho4: np.ndarray, n_theta: int = 101, n_phi: int = 200,
                                refine: bool = True) -> float:
    """Max over projective measurements on qubit B of S(A) - sum_k p_k S(A|k).

    Polar angles cover [0, pi/2] (n and -n give the same measurement),
    azimuths cover [0, 2 pi).  The grid optimum is polished by Nelder-Mead.
    """
    rho4 = np.asarray(rho4, dtype=complex)
    if n_theta < 100 or n_phi < 200:
        raise ValueError("measurement grid must be at least 100 x 200")
    thetas = np.linspace(0.0, 0.5 * np.pi, n_theta)
    phis = np.linspace(0.0, 2 * np.pi, n_phi, endpoint=False)
    grid = _kernels.conditional_entropy_grid(rho4, thetas, phis)
    k = np.unravel_index(np.argmin(grid), grid.shape)
    best = float(grid[k])
    if refine:
        res = optimize.minimize(lambda x: _cond_entropy_at(rho4, x),
                                x0=[thetas[k[0]], phis[k[1]]], method="Nelder-Mead",
                                options={"xatol": 1e-9, "fatol": 1e-13})
        best = min(best, float(res.fun))
    ra, _ = _partial_traces(rho4)
    return _entropy(ra) - best


def brute_discord(rho4: np.ndarray, n_theta: int = 101, n_phi: int = 200,
                  refine: bool = True) -> float:
    """Discord (bits) with the measurement optimised numerically on qubit B."""
    rho4 = np.asarray(rho4, dtype=complex)
    return von_neumann_mutual_information(rho4) - brute_classical_correlation(
        rho4, n_theta, n_phi, refine)


def wootters_concurrence(rho4: np.ndarray) -> float:
    """Largest minus the other three eigenvalues of sqrt(sqrt(rho) rho~ sqrt(rho)).

    Those eigenvalues are the singular values of sqrt(rho) sqrt(rho~), which
    avoids a second square root and keeps small ones accurate.
    """
    rho4 = np.asarray(rho4, dtype=complex)
    yy = np.kron(_SY, _SY)
    w, v = np.linalg.eigh(rho4)
    # round-off eigenvalues would leak ~1e-8 through the square root
    w = np.where(w > 1e-14 * max(w.max(), 1e-300), w, 0.0)
    sq = (v * np.sqrt(w)) @ v.conj().T
    lam = np.linalg.svd(sq @ (yy @ sq.conj() @ yy), compute_uv=False)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def partial_transpose_min_eigenvalue(rho4: np.ndarray) -> float:
    r = np.asarray(rho4).reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)
    return float(np.linalg.eigvalsh(r).min())
