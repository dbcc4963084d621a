"""Numerical laboratory for a two-leg ladder with asymmetric leg hoppings,
split cross couplings, and optional on-leg gain/loss.

The package is organized by task: `model` holds parameters and Hamiltonian
builders, `spectra` the dispersion/diagonalization layer, `topology` the
winding and Z2 invariants, `nonbloch` the open-boundary factor analysis,
`edgemodes` the boundary and compact constructions, `diagnostics` the
state-resolved observables, and `sweep` + `cli` the export front end.
"""

from .errors import ConfigError, LadderError, NumericsError
from .model import (
    BlochMatrix,
    Boundary,
    LadderParams,
    build_bloch,
    build_hermitian_counterpart,
    build_realspace,
    symmetry_operator,
)
from .spectra import (
    ComplexSpectrum,
    EpSet,
    ExactObcSpectrum,
    RungReference,
    SimilarityReport,
    band_overlap,
    diagonalize,
    dispersion,
    exact_obc_sublattice,
    exceptional_points,
    k_grid,
    pt_threshold_closed_form,
    pt_threshold_gamma,
    rung_reference_spectrum,
    sublattice_block_similarity,
)
from .topology import (
    HybridWinding,
    VortexCharge,
    WindingResult,
    awn,
    diabolic_points,
    hybrid_winding,
    vortex_charge,
    winding_phi,
    z2_closed_form,
    z2_invariant,
)
from .nonbloch import (
    AmplitudeRatios,
    BetaQuartet,
    BoundaryReport,
    FiniteMigration,
    GbzSample,
    ModeWeightRatio,
    ProfileDecomposition,
    SfVerdict,
    a_roots,
    beta_roots,
    boundary_system,
    gbz_circle_radii,
    gbz_from_obc,
    migration,
    migration_asymptote,
    migration_finite_n,
    mode_weight_ratio,
    profile_decomposition,
    sf_classify,
    x_ratios,
)
from .edgemodes import (
    EdgeMode,
    EdgeModeSet,
    TransferData,
    build_compact_modes,
    build_zero_modes,
    gamma_shifted_modes,
    pseudo_inversion_zero_modes,
    transfer_data,
)
from .diagnostics import (
    LocalizationReport,
    StateDiagnostics,
    SymmetryReport,
    classify_states,
    fit_cell_decay,
    half_masses,
    ipr,
    ipr_closed_form,
    state_imbalance,
    symmetry_report,
    total_imbalance,
    unidirectional_chain,
    unidirectional_modes,
)

__version__ = "0.1.0"
