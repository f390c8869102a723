"""
XY chain description and its quadratic-form coupling matrices.

The Hamiltonian is

    H = sum_i (kappa / 4) (J_i sx_i sx_{i+1} + K_i sy_i sy_{i+1})

with kappa fixed to 1, so every energy in this package is in units of kappa
and every temperature in units of kappa / k_B.  After the Jordan-Wigner map
it reads H = sum_ij c+_i A_ij c_j + 1/2 (c+_i B_ij c+_j + h.c.).

Sites are 0-based throughout the Python API.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

#: Stand-in for "lambda ~ 0": an exactly vanishing end coupling decouples the
#: end spins and makes the ground state degenerate.
LAMBDA_FLOOR = 1e-3

#: Inverse temperature tag for the ground state.
GROUND = math.inf


def _as_tuple(values) -> tuple:
    return tuple(float(v) for v in np.atleast_1d(np.asarray(values, dtype=float)))


@dataclass(frozen=True)
class ChainSpec:
    """Full model description.

    Two layouts are supported:

    * weak-end chains: ``lambda1`` and ``lambda2`` are set, the chain is open
      and ``bulk_jx``/``bulk_jy`` hold the ``N - 3`` bulk bonds (2,3) ...
      (N-2, N-1) in 1-based bond labels.  Bonds (1,2) and (N-1,N) get
      ``J = lambda1`` and ``K = lambda2``.
    * explicit chains: ``lambda1 = lambda2 = None`` and the coupling lists
      hold every bond, length ``N - 1`` (open) or ``N`` (closed, the last
      entry is the (N, 1) bond).
    """

    n_spins: int
    bulk_jx: tuple
    bulk_jy: tuple
    lambda1: Optional[float] = None
    lambda2: Optional[float] = None
    boundary: str = "open"
    beta: float = GROUND
    gamma: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "bulk_jx", _as_tuple(self.bulk_jx) if len(self.bulk_jx) else ())
        object.__setattr__(self, "bulk_jy", _as_tuple(self.bulk_jy) if len(self.bulk_jy) else ())
        self.validate()

    # -- construction helpers -------------------------------------------------

    @classmethod
    def weak_end(cls, n_spins: int, lambda1: float, lambda2: float, gamma: float = 0.0,
                 beta: float = GROUND) -> "ChainSpec":
        """Open chain with an XY bulk ``J = 1 + gamma``, ``K = 1 - gamma``."""
        nb = max(n_spins - 3, 0)
        return cls(n_spins, (1.0 + gamma,) * nb, (1.0 - gamma,) * nb,
                   lambda1=lambda1, lambda2=lambda2, beta=beta, gamma=gamma)

    @classmethod
    def uniform(cls, n_spins: int, jx: float = 1.0, jy: float = 1.0,
                boundary: str = "open", beta: float = GROUND) -> "ChainSpec":
        nb = n_spins - 1 if boundary == "open" else n_spins
        return cls(n_spins, (jx,) * nb, (jy,) * nb, boundary=boundary, beta=beta)

    def with_lambda1(self, lambda1: float) -> "ChainSpec":
        return dataclasses.replace(self, lambda1=lambda1)

    def with_beta(self, beta: float) -> "ChainSpec":
        return dataclasses.replace(self, beta=beta)

    # -- checks -----------------------------------------------------------------

    @property
    def is_weak_end(self) -> bool:
        return self.lambda1 is not None or self.lambda2 is not None

    def validate(self) -> None:
        n = self.n_spins
        if int(n) != n or n < 2:
            raise ValueError(f"n_spins must be an integer >= 2, got {n!r}")
        if self.boundary not in ("open", "closed"):
            raise ValueError(f"boundary must be 'open' or 'closed', got {self.boundary!r}")
        if not (self.beta > 0):
            raise ValueError(f"beta must be positive (or GROUND), got {self.beta!r}")
        if len(self.bulk_jx) != len(self.bulk_jy):
            raise ValueError("bulk_jx and bulk_jy must have the same length")
        if self.is_weak_end:
            if self.lambda1 is None or self.lambda2 is None:
                raise ValueError("weak-end chains need both lambda1 and lambda2")
            if not (self.lambda1 > 0 and self.lambda2 > 0):
                raise ValueError(
                    f"end couplings must be positive (use LAMBDA_FLOOR={LAMBDA_FLOOR} "
                    f"for ~0), got lambda1={self.lambda1}, lambda2={self.lambda2}")
            if self.boundary != "open":
                raise ValueError("weak-end chains are open")
            if n < 3:
                raise ValueError("weak-end chains need n_spins >= 3")
            if len(self.bulk_jx) != n - 3:
                raise ValueError(f"weak-end chain of {n} spins needs {n - 3} bulk bonds, "
                                 f"got {len(self.bulk_jx)}")
        else:
            want = n - 1 if self.boundary == "open" else n
            if len(self.bulk_jx) != want:
                raise ValueError(f"{self.boundary} chain of {n} spins needs {want} bonds, "
                                 f"got {len(self.bulk_jx)}")

    def bond_couplings(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-bond ``(J, K)`` arrays; bond ``i`` joins sites ``i`` and ``i + 1 (mod N)``."""
        if self.is_weak_end:
            jx = np.array([self.lambda1, *self.bulk_jx, self.lambda1])
            jy = np.array([self.lambda2, *self.bulk_jy, self.lambda2])
        else:
            jx = np.array(self.bulk_jx)
            jy = np.array(self.bulk_jy)
        return jx, jy


@dataclass(frozen=True)
class QuadraticForm:
    """Symmetric hopping matrix ``a`` and antisymmetric pairing matrix ``b``."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        for m in (self.a, self.b):
            m.setflags(write=False)

    @property
    def n(self) -> int:
        return self.a.shape[0]


def build_quadratic_form(spec: ChainSpec) -> QuadraticForm:
    """Coupling matrices of the Jordan-Wigner fermion Hamiltonian.

    Bond (i, i+1) with couplings (J, K) contributes ``(J + K) / 4`` to
    ``a[i, i+1] = a[i+1, i]`` and ``(J - K) / 4`` to ``b[i, i+1] = -b[i+1, i]``.
    The closing bond of a closed chain lands on the corners as
    ``a[0, N-1] = a[N-1, 0] = (J + K) / 4`` and ``b[0, N-1] = -b[N-1, 0] = (J - K) / 4``;
    the fermion-parity twist of the Jordan-Wigner string is not applied.
    """
    spec.validate()
    n = spec.n_spins
    jx, jy = spec.bond_couplings()
    hop = 0.5 * (jx + jy)
    pair = 0.5 * (jx - jy)
    a = np.zeros((n, n))
    b = np.zeros((n, n))
    idx = np.arange(n - 1)
    a[idx, idx + 1] = 0.5 * hop[: n - 1]
    b[idx, idx + 1] = 0.5 * pair[: n - 1]
    if spec.boundary == "closed":
        # closing bond (N-1, 0): b[0, N-1] = +pair/2 orientation
        a[0, n - 1] += 0.5 * hop[n - 1]
        b[0, n - 1] += 0.5 * pair[n - 1]
    # symmetrise by construction so the invariants hold exactly
    a = a + a.T
    b = b - b.T
    return QuadraticForm(a, b)

