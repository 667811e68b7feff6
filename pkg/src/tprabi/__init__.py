"""Spectral collapse in the two-photon quantum Rabi model.

Truncated-basis Hamiltonian builders, banded and tridiagonal eigensolvers
with a tail-norm convergence filter, closed-form results for the degenerate
regime, and coupling sweeps that locate the collapse point g_c = omega / 2.
"""

from .analytic import (
    Regime,
    RegimeData,
    SpectralCollapseError,
    classify_regime,
    critical_coupling,
    degenerate_energies,
    degenerate_spectrum,
    fock_to_position,
    general_solution,
    hermite_gauss,
    kummer_1f1,
    plane_wave,
)
from .model import (
    ALL_SUBSPACES,
    HermitianMatrix,
    ModelParams,
    SubspaceLabel,
    TridiagonalMatrix,
    boson_parity,
    build_full_fock,
    build_phase_space,
    build_rotated_fock,
    build_subspace_tridiagonal,
)
from .solver import (
    Alignment,
    EigenPair,
    FilteredSpectrum,
    align_spectra,
    convergence_filter,
    interior_count,
    solve_hermitian,
    solve_tridiagonal,
    tail_norm_of,
)
from .sweep import (
    FAILURE_COUNT,
    CollapseEstimate,
    ExceptionalState,
    RelativeComb,
    SweepConfig,
    SweepResult,
    SweepRow,
    detect_collapse,
    exceptional_state,
    refine_comb,
    run_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_SUBSPACES",
    "Alignment",
    "CollapseEstimate",
    "EigenPair",
    "ExceptionalState",
    "FAILURE_COUNT",
    "FilteredSpectrum",
    "HermitianMatrix",
    "ModelParams",
    "Regime",
    "RegimeData",
    "RelativeComb",
    "SpectralCollapseError",
    "SubspaceLabel",
    "SweepConfig",
    "SweepResult",
    "SweepRow",
    "TridiagonalMatrix",
    "align_spectra",
    "boson_parity",
    "build_full_fock",
    "build_phase_space",
    "build_rotated_fock",
    "build_subspace_tridiagonal",
    "classify_regime",
    "convergence_filter",
    "critical_coupling",
    "degenerate_energies",
    "degenerate_spectrum",
    "detect_collapse",
    "exceptional_state",
    "fock_to_position",
    "general_solution",
    "hermite_gauss",
    "interior_count",
    "kummer_1f1",
    "plane_wave",
    "refine_comb",
    "run_sweep",
    "solve_hermitian",
    "solve_tridiagonal",
    "tail_norm_of",
    "__version__",
]
