"""
Side-by-side comparison of the fermion pipeline with the dense oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import oracle
from .chain import ChainSpec, build_quadratic_form
from .correlators import bell_eigenvalues, pair_correlators
from .fermions import correlation_matrix, diagonalize, energy_gap
from .freezing import evaluate
from .qinfo import measure_arrays

EXACT_TOL = 1e-8
BRUTE_TOL = 1e-4


@dataclass
class Comparison:
    spec: ChainSpec
    deviations: dict = field(default_factory=dict)
    degenerate: bool = False
    exact_tol: float = EXACT_TOL
    brute_tol: float = BRUTE_TOL

    @property
    def passed(self) -> bool:
        for key, dev in self.deviations.items():
            tol = self.brute_tol if key.startswith("brute_") else self.exact_tol
            if not dev <= tol:
                return False
        return not self.degenerate


def compare(spec: ChainSpec, all_pairs: bool = True, brute: bool = True) -> Comparison:
    """Deviations between the two routes for one open chain.

    Keys: ``correlators`` (every site pair when ``all_pairs``), ``end_pair``
    (the route the sweeps use), ``bell``, ``mutual_info``, ``concurrence``,
    ``gap``, and the grid-search ``brute_classical`` / ``brute_discord``.
    """
    n = spec.n_spins
    state = oracle.exact_thermal_state(spec, spec.beta)
    spectrum = diagonalize(build_quadratic_form(spec))
    corr = correlation_matrix(spectrum, spec.beta)
    cmp = Comparison(spec, degenerate=bool(math.isinf(spec.beta) and state.degenerate))

    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)] if all_pairs else [(0, n - 1)]
    dev = 0.0
    for i, j in pairs:
        t = pair_correlators(corr, i, j)
        ref = oracle.correlators_from_state(oracle.reduced_state(state, i, j))
        dev = max(dev, float(np.max(np.abs(t.as_array() - np.array(ref)))))
    cmp.deviations["correlators"] = dev

    point = evaluate(spec)
    t = point.correlators
    rho4 = oracle.reduced_state(state, 0, n - 1)
    ref = np.array(oracle.correlators_from_state(rho4))
    cmp.deviations["end_pair"] = float(np.max(np.abs(t.as_array() - ref)))
    cmp.deviations["bell_pattern"] = oracle.bell_diagonal_deviation(rho4)

    e = np.sort(bell_eigenvalues(t.txx, t.tyy, t.tzz))
    e_ref = np.sort(np.linalg.eigvalsh(rho4))
    cmp.deviations["bell"] = float(np.max(np.abs(e - e_ref)))

    mi, cc, disc, conc = measure_arrays(t.txx, t.tyy, t.tzz)
    cmp.deviations["mutual_info"] = abs(float(mi) - oracle.von_neumann_mutual_information(rho4))
    cmp.deviations["concurrence"] = abs(float(conc) - oracle.wootters_concurrence(rho4))
    cmp.deviations["gap"] = abs(energy_gap(spectrum) - oracle.exact_gap(spec))
    if brute:
        cmp.deviations["brute_classical"] = abs(float(cc) - oracle.brute_classical_correlation(rho4))
        cmp.deviations["brute_discord"] = abs(float(disc) - oracle.brute_discord(rho4))
    return cmp


def random_specs(count: int, n_values=(4, 6, 8, 10), betas=(math.inf, 20.0, 5.0),
                 seed: int = 0) -> list[ChainSpec]:
    """Open weak-end chains with lambda in (0, 1] and gamma in [-0.5, 0.5]."""
    rng = np.random.default_rng(seed)
    specs = []
    for _ in range(count):
        n = int(rng.choice(n_values))
        l1, l2 = 1.0 - rng.random(2)
        gamma = float(rng.uniform(-0.5, 0.5))
        beta = float(betas[int(rng.integers(len(betas)))])
        specs.append(ChainSpec.weak_end(n, float(l1), float(l2), gamma=gamma, beta=beta))
    return specs


def oracle_check(specs, all_pairs: bool = True, brute: bool = True) -> list[Comparison]:
    return [compare(s, all_pairs=all_pairs, brute=brute) for s in specs]


def closed_chain_discrepancy(spec: ChainSpec) -> dict:
    """How far the untwisted closed-chain fermion model is from the spin chain.

    The corner entries carry no parity-sector sign, so the fermion route
    solves a slightly different problem; this reports by how much.
    Returns the largest correlator deviation over all site pairs and the
    ground-energy difference.
    """
    if spec.boundary != "closed":
        raise ValueError("closed_chain_discrepancy needs a closed chain")
    n = spec.n_spins
    spectrum = diagonalize(build_quadratic_form(spec))
    corr = correlation_matrix(spectrum, spec.beta)
    state = oracle.exact_thermal_state(spec, spec.beta)
    dev = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            t = pair_correlators(corr, i, j).as_array()
            ref = np.array(oracle.correlators_from_state(oracle.reduced_state(state, i, j)))
            dev = max(dev, float(np.max(np.abs(t - ref))))
    e0_fermion = -0.5 * float(np.sum(spectrum.energies))
    return {"correlators": dev,
            "ground_energy": abs(e0_fermion - float(state.energies[0])),
            "oracle_degenerate": bool(state.degenerate)}
