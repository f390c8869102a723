"""
Parameter sweeps over the end coupling lambda1 and the detectors built on
them: freezing length and frozen discord, entanglement sudden death, the
anisotropy order parameter ``lambda2 - l_f``, the thermal critical
temperature and the frozen energy gap.

"Adiabatic" here means quasi-static: every grid point is an independent
ground-state (or Gibbs-state) evaluation.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .chain import GROUND, ChainSpec, build_quadratic_form
from .correlators import (BellDiagonalState, SingularCouplingError, TwoSiteCorrelators,
                          bell_state, end_to_end_correlators, minor_correlators,
                          pair_correlators)
from .fermions import correlation_matrix, correlation_stack, diagonalize, energy_gap
from .qinfo import CorrelationMeasures, measure_arrays, measures

DEFAULT_PLATEAU_TOL = 1e-3
DEFAULT_ESD_TOL = 1e-6
DEFAULT_RHO_MIN = 0.99
MAX_GRID_STEP = 0.005
_STEP_SLACK = 1e-9


class SweepError(RuntimeError):
    """A grid point failed; the message names it."""


class GridTooCoarseError(ValueError):
    pass


def default_jobs() -> int:
    """Parallelism degree from ``XYFREEZE_JOBS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("XYFREEZE_JOBS", "1")))
    except ValueError:
        return 1


def lambda_grid(start: float, stop: float, step: float) -> np.ndarray:
    """Inclusive, exactly reproducible grid ``start, start + step, ..., stop``."""
    if step <= 0:
        raise ValueError("grid step must be positive")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    if count < 1:
        raise ValueError(f"empty grid: start={start}, stop={stop}, step={step}")
    return np.round(start + step * np.arange(count), 12)


# ---------------------------------------------------------------------------
# single point
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PointResult:
    lambda1: float
    correlators: TwoSiteCorrelators
    bell: BellDiagonalState
    measures: CorrelationMeasures
    gap: float


def evaluate(spec: ChainSpec) -> PointResult:
    """End-to-end correlators, measures and gap for one chain."""
    qf = build_quadratic_form(spec)
    spectrum = diagonalize(qf)
    corr = correlation_matrix(spectrum, spec.beta)
    n = spec.n_spins
    t = None
    if corr.is_ground and spec.boundary == "open":
        try:
            t = end_to_end_correlators(corr, qf)
        except SingularCouplingError:
            t = None
    if t is None:
        t = pair_correlators(corr, 0, n - 1)
    return PointResult(
        lambda1=float(spec.lambda1) if spec.lambda1 is not None else math.nan,
        correlators=t,
        bell=bell_state(t),
        measures=measures(t),
        gap=energy_gap(spectrum),
    )


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepResult:
    template: ChainSpec
    lambda1_grid: np.ndarray
    points: tuple

    def _col(self, get):
        return np.array([get(p) for p in self.points])

    @property
    def discord(self):
        return self._col(lambda p: p.measures.discord)

    @property
    def concurrence(self):
        return self._col(lambda p: p.measures.concurrence)

    @property
    def mutual_info(self):
        return self._col(lambda p: p.measures.mutual_info)

    @property
    def classical(self):
        return self._col(lambda p: p.measures.classical)

    @property
    def txx(self):
        return self._col(lambda p: p.correlators.txx)

    @property
    def tyy(self):
        return self._col(lambda p: p.correlators.tyy)

    @property
    def tzz(self):
        return self._col(lambda p: p.correlators.tzz)

    @property
    def gap(self):
        return self._col(lambda p: p.gap)

    def __len__(self):
        return len(self.points)


def _check_grid(grid):
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("lambda1 grid must be a non-empty 1-d sequence")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("lambda1 grid must be strictly ascending")
    if grid[0] <= 0 or grid[-1] > 1:
        raise ValueError("lambda1 grid must lie within (0, 1]")
    return grid


def _evaluate_indexed(args):
    k, spec = args
    try:
        return evaluate(spec)
    except Exception as exc:  # re-raised with the grid point attached
        raise SweepError(f"grid point {k} (lambda1={spec.lambda1!r}) failed: {exc}") from exc


def evaluate_many(specs: Sequence[ChainSpec], jobs: int = 1) -> tuple:
    """``evaluate`` over many chains, optionally in worker processes.

    Results come back in input order whatever the parallelism.
    """
    indexed = list(enumerate(specs))
    if jobs > 1 and len(indexed) > 1:
        chunk = max(1, len(indexed) // (4 * jobs))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return tuple(pool.map(_evaluate_indexed, indexed, chunksize=chunk))
    return tuple(_evaluate_indexed(s) for s in indexed)


def sweep(template: ChainSpec, lambda1_grid: Sequence[float], jobs: int = 1) -> SweepResult:
    """Evaluate the pipeline at every ``lambda1`` with all else fixed."""
    if not template.is_weak_end:
        raise ValueError("sweeps need a weak-end template")
    grid = _check_grid(lambda1_grid)
    points = evaluate_many([template.with_lambda1(float(l1)) for l1 in grid], jobs)
    grid.setflags(write=False)
    return SweepResult(template, grid, points)


# ---------------------------------------------------------------------------
# freezing detection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FreezingReport:
    l_f: float
    l_f_err: float
    d_frozen: float
    esd_point: Optional[float]
    plateau_tol: float
    order_parameter: float
    reference: float
    plateau_end: int


def grid_step(grid) -> float:
    grid = np.asarray(grid)
    return float(np.max(np.diff(grid))) if grid.size > 1 else 0.0


def _tolerance(tol, relative, reference):
    return tol * abs(reference) if relative else tol


def detect_freezing(result: SweepResult, plateau_tol: float = DEFAULT_PLATEAU_TOL,
                    relative: bool = False, esd_tol: float = DEFAULT_ESD_TOL,
                    max_step: float = MAX_GRID_STEP) -> FreezingReport:
    """Freezing length, frozen discord and ESD point of a lambda1 sweep.

    ``l_f`` is the largest grid lambda1 such that discord stays within the
    tolerance of its value at the first grid point for every grid point up
    to it.  With ``relative=True`` the tolerance is ``plateau_tol`` times
    that first value.
    """
    grid = result.lambda1_grid
    lambda2 = result.template.lambda2
    if len(grid) > 1:
        if grid_step(grid) > max_step * (1 + _STEP_SLACK) or grid[0] > max_step * (1 + _STEP_SLACK):
            raise GridTooCoarseError(
                f"grid resolution must be <= {max_step} starting near 0; "
                f"got first point {grid[0]} and largest step {grid_step(grid)}")
    if grid[-1] < lambda2 - _STEP_SLACK:
        raise GridTooCoarseError(f"grid stops at {grid[-1]}, below lambda2={lambda2}")
    disc = result.discord
    ref = float(disc[0])
    tol = _tolerance(plateau_tol, relative, ref)
    outside = np.nonzero(np.abs(disc - ref) > tol)[0]
    end = int(outside[0]) - 1 if outside.size else len(disc) - 1
    conc = result.concurrence
    dead = np.nonzero(conc <= esd_tol)[0]
    l_f = float(grid[end])
    return FreezingReport(
        l_f=l_f,
        l_f_err=grid_step(grid),
        d_frozen=float(np.mean(disc[: end + 1])),
        esd_point=float(grid[dead[0]]) if dead.size else None,
        plateau_tol=tol,
        order_parameter=float(lambda2 - l_f),
        reference=ref,
        plateau_end=end,
    )


# ---------------------------------------------------------------------------
# anisotropy transition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AnisotropyReport:
    n_spins: int
    lambda2: float
    gamma_grid: np.ndarray
    l_f: np.ndarray
    order_parameter: np.ndarray
    d_frozen: np.ndarray
    gamma_c: Optional[float]
    d_frozen_curvature: np.ndarray = field(repr=False, default=None)


def critical_anisotropy(gamma_grid, order_parameter,
                        detector: str = "magnitude") -> Optional[float]:
    """Location of the sharp change of the order parameter along gamma.

    ``"magnitude"`` picks the largest ``|difference|``; ``"drop"`` only looks
    at decreases, which matters on grids that include negative gamma.  Both
    report the gamma just before the step.
    """
    g = np.asarray(gamma_grid, dtype=float)
    op = np.asarray(order_parameter, dtype=float)
    if g.size < 2:
        return None
    d = np.diff(op) / np.diff(g)
    if detector == "drop":
        k = int(np.argmin(d))
        if d[k] >= 0:
            return None
    elif detector == "magnitude":
        k = int(np.argmax(np.abs(d)))
    else:
        raise ValueError(f"unknown detector {detector!r}")
    return float(g[k])


def anisotropy_scan(gamma_grid: Sequence[float], lambda2: float, n_spins: int,
                    lambda1_grid: Sequence[float], plateau_tol: float = DEFAULT_PLATEAU_TOL,
                    relative: bool = False, beta: float = GROUND, detector: str = "magnitude",
                    jobs: int = 1) -> AnisotropyReport:
    gammas = np.asarray(gamma_grid, dtype=float)
    if gammas.size == 0 or np.any(np.diff(gammas) <= 0):
        raise ValueError("gamma grid must be non-empty and strictly ascending")
    grid = _check_grid(lambda1_grid)
    grid.setflags(write=False)
    templates = [ChainSpec.weak_end(n_spins, float(grid[0]), lambda2, gamma=float(g), beta=beta)
                 for g in gammas]
    # one flat batch so a worker pool is started only once
    flat = evaluate_many([t.with_lambda1(float(l1)) for t in templates for l1 in grid], jobs)
    m = grid.size
    lfs, d_f = [], []
    for k, template in enumerate(templates):
        result = SweepResult(template, grid, flat[k * m:(k + 1) * m])
        rep = detect_freezing(result, plateau_tol, relative)
        lfs.append(rep.l_f)
        d_f.append(rep.d_frozen)
    lfs = np.array(lfs)
    d_f = np.array(d_f)
    op = lambda2 - lfs
    curv = np.gradient(np.gradient(d_f, gammas), gammas) if gammas.size > 2 else np.zeros_like(d_f)
    return AnisotropyReport(n_spins, lambda2, gammas, lfs, op, d_f,
                            critical_anisotropy(gammas, op, detector), curv)


# ---------------------------------------------------------------------------
# thermal robustness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ThermalReport:
    n_spins: int
    temperatures: np.ndarray
    l_f: float
    l_f_thermal: np.ndarray
    ratio: np.ndarray
    t_c: Optional[float]
    monotone: bool
    plateau_tol: float


def thermal_discord_table(template: ChainSpec, lambda1_grid, temperatures) -> np.ndarray:
    """End-to-end discord for every (lambda1, T), shape ``(n_lambda, n_T)``.

    One diagonalisation per lambda1; all temperatures share it.
    """
    temps = np.asarray(temperatures, dtype=float)
    if np.any(temps <= 0):
        raise ValueError("temperatures must be positive")
    betas = 1.0 / temps
    n = template.n_spins
    out = np.empty((len(lambda1_grid), temps.size))
    for k, l1 in enumerate(lambda1_grid):
        try:
            spec = template.with_lambda1(float(l1))
            spectrum = diagonalize(build_quadratic_form(spec))
            g = correlation_stack(spectrum, betas)
            txx, tyy, tzz = minor_correlators(g, 0, n - 1)
            out[k] = measure_arrays(txx, tyy, tzz)[2]
        except Exception as exc:
            raise SweepError(f"grid point {k} (lambda1={l1!r}) failed: {exc}") from exc
    return out


def thermal_freezing_length(lambda1_grid, discord, reference: float, tol: float) -> float:
    """Upper edge of the set of grid points whose discord still equals the
    ground-state frozen value within ``tol``; 0 when none does.

    The lowest end-coupling points lose their correlations to the softest
    mode at any finite temperature, so the plateau is tracked from its top.
    """
    hits = np.nonzero(np.abs(np.asarray(discord) - reference) <= tol)[0]
    return float(np.asarray(lambda1_grid)[hits[-1]]) if hits.size else 0.0


def thermal_report(template: ChainSpec, lambda1_grid, temperatures, table: np.ndarray,
                   ground: FreezingReport, rho_min: float = DEFAULT_RHO_MIN) -> ThermalReport:
    """Detector step of :func:`thermal_scan` on a precomputed discord table.

    Lets several thresholds share one (costly) table.
    """
    grid = np.asarray(lambda1_grid, dtype=float)
    temps = np.asarray(temperatures, dtype=float)
    tol = ground.plateau_tol
    lf_t = np.array([thermal_freezing_length(grid, table[:, i], ground.reference, tol)
                     for i in range(temps.size)])
    ratio = lf_t / ground.l_f if ground.l_f > 0 else np.zeros_like(lf_t)
    ok = np.nonzero(ratio >= rho_min)[0]
    t_c = float(temps[ok[-1]]) if ok.size else None
    monotone = bool(np.all(np.diff(ratio) <= 1e-12))
    return ThermalReport(template.n_spins, temps, ground.l_f, lf_t, ratio, t_c, monotone, tol)


def thermal_scan(temperatures: Sequence[float], template: ChainSpec,
                 lambda1_grid: Sequence[float], plateau_tol: float = DEFAULT_PLATEAU_TOL,
                 relative: bool = False, rho_min: float = DEFAULT_RHO_MIN) -> ThermalReport:
    """Ratio of thermal to ground-state freezing length over a temperature grid.

    ``t_c`` is the largest temperature whose ratio is at least ``rho_min``.
    ``monotone`` flags whether the ratio is nonincreasing in T.
    """
    temps = np.asarray(temperatures, dtype=float)
    if temps.size == 0 or np.any(np.diff(temps) <= 0):
        raise ValueError("temperature grid must be non-empty and strictly ascending")
    grid = _check_grid(lambda1_grid)
    ground = template.with_beta(GROUND)
    rep = detect_freezing(sweep(ground, grid), plateau_tol, relative)
    table = thermal_discord_table(ground, grid, temps)
    return thermal_report(template, grid, temps, table, rep, rho_min)


def critical_temperature_fit(n_values, t_c_values, scale: float = 1e4) -> tuple[float, float]:
    """Least-squares line through ``(N, scale * T_c)``; returns ``(slope, intercept)``."""
    slope, intercept = np.polyfit(np.asarray(n_values, dtype=float),
                                  scale * np.asarray(t_c_values, dtype=float), 1)
    return float(slope), float(intercept)


# ---------------------------------------------------------------------------
# energy gap
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GapFreezingReport:
    onset: float
    frozen_gap: float
    frozen_range: tuple
    rising_before: bool
    tol: float


def gap_freezing(result: SweepResult, tol: float = 1e-8) -> GapFreezingReport:
    """The gap plateau, anchored at the top of the grid and walked downwards."""
    grid = result.lambda1_grid
    gap = result.gap
    ref = gap[-1]
    outside = np.nonzero(np.abs(gap - ref) > tol)[0]
    start = int(outside[-1]) + 1 if outside.size else 0
    rising = bool(np.all(np.diff(gap[: start + 1]) >= -tol))
    return GapFreezingReport(
        onset=float(grid[start]),
        frozen_gap=float(np.mean(gap[start:])),
        frozen_range=(float(grid[start]), float(grid[-1])),
        rising_before=rising,
        tol=tol,
    )
