"""Long-range discord, entanglement and gap freezing in weakly end-coupled
XY chains, computed through the Jordan-Wigner free-fermion route."""

__version__ = "0.1.0"

from .chain import GROUND, LAMBDA_FLOOR, ChainSpec, QuadraticForm, build_quadratic_form
from .correlators import (BellDiagonalState, TwoSiteCorrelators, bell_state,
                          end_to_end_correlators, pair_correlators)
from .fermions import (CorrelationMatrix, FermionSpectrum, correlation_matrix, diagonalize,
                       energy_gap)
from .freezing import (anisotropy_scan, detect_freezing, evaluate, gap_freezing, sweep,
                       thermal_scan)
from .qinfo import CorrelationMeasures, measures


__all__ = [
    "GROUND", "LAMBDA_FLOOR", "ChainSpec", "QuadraticForm", "build_quadratic_form",
    "BellDiagonalState", "TwoSiteCorrelators", "bell_state", "end_to_end_correlators",
    "pair_correlators", "CorrelationMatrix", "FermionSpectrum", "correlation_matrix",
    "diagonalize", "energy_gap", "anisotropy_scan", "detect_freezing", "evaluate",
    "gap_freezing", "sweep", "thermal_scan", "CorrelationMeasures", "measures",
]
