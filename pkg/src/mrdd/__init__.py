"""Manipulation-robust regression discontinuity analysis.

Boundary estimation of one-sided means and densities, the sequential
density/balance diagnostic protocol, partial-identification bounds (crude,
sharp, fuzzy, covariate-tightened) with bootstrap inference, and synthetic
data generators with analytically known answers.
"""

from .boundary import (
    Bandwidths,
    BoundaryEstimates,
    Dataset,
    FitConfig,
    SideCounts,
    estimate_boundary,
)
from .bounds import (
    BoundsResult,
    BoundsStatus,
    FuzzyInputs,
    TrimmingCurve,
    TypeAssumption,
    binary_sharp_gfuncs,
    covariate_bounds,
    fuzzy_bounds,
    mixed_bounds,
    sharp_type2_bounds,
    type2_bounds,
    type3_bounds,
    type4_bounds,
    weighted_trimmed_means,
)
from .diagnostics import (
    ProtocolConfig,
    ProtocolOutcome,
    TestResult,
    Verdict,
    balance_test,
    density_discontinuity_test,
    run_sequential_protocol,
)
from .inference import (
    BootstrapBounds,
    BootstrapConfig,
    BoundaryDraws,
    IntervalCI,
    RMode,
    bootstrap_boundary_replicates,
    bootstrap_bounds,
    bounds_from_draws,
    imbens_manski_ci,
)
from .localfit import (
    FitSpec,
    KernelKind,
    LocalFitResult,
    Side,
    boundary_density,
    kernel_weight,
    local_poly_fit,
    rot_bandwidth,
)
from .synth import (
    AppendixDSpec,
    LemmaMomentReport,
    OracleRow,
    TypedParams,
    TypedSample,
    brute_force_trimming,
    gen_appendix_d,
    gen_counterexample_e,
    gen_typed,
    oracle_appendix_d,
    read_typed_csv,
    verify_lemma_moments,
    write_typed_csv,
)

__version__ = "0.1.0"

__all__ = [
    "AppendixDSpec",
    "Bandwidths",
    "BootstrapBounds",
    "BootstrapConfig",
    "BoundaryDraws",
    "BoundaryEstimates",
    "BoundsResult",
    "BoundsStatus",
    "Dataset",
    "FitConfig",
    "FitSpec",
    "FuzzyInputs",
    "IntervalCI",
    "KernelKind",
    "LemmaMomentReport",
    "LocalFitResult",
    "OracleRow",
    "ProtocolConfig",
    "ProtocolOutcome",
    "RMode",
    "Side",
    "SideCounts",
    "TestResult",
    "TrimmingCurve",
    "TypeAssumption",
    "TypedParams",
    "TypedSample",
    "Verdict",
    "balance_test",
    "binary_sharp_gfuncs",
    "bootstrap_boundary_replicates",
    "bootstrap_bounds",
    "boundary_density",
    "bounds_from_draws",
    "brute_force_trimming",
    "covariate_bounds",
    "density_discontinuity_test",
    "estimate_boundary",
    "fuzzy_bounds",
    "gen_appendix_d",
    "gen_counterexample_e",
    "gen_typed",
    "imbens_manski_ci",
    "kernel_weight",
    "local_poly_fit",
    "mixed_bounds",
    "oracle_appendix_d",
    "read_typed_csv",
    "rot_bandwidth",
    "run_sequential_protocol",
    "sharp_type2_bounds",
    "type2_bounds",
    "type3_bounds",
    "type4_bounds",
    "verify_lemma_moments",
    "weighted_trimmed_means",
    "write_typed_csv",
]
