"""Four-parameter scale-space norms on the discretized upper half-space.

The package computes sliding-window (Whitney box) norms over a torus cross
a geometric scale grid, their tent-space and dyadic-cube variants, kernel
extensions of boundary data with the matching boundary smoothness norms,
and ships a verification battery that certifies every advertised norm
equivalence numerically on a seeded corpus.
"""

from .corpus import (
    CorpusEntry,
    SeededStream,
    boundary_entries,
    generate_boundary,
    generate_halfspace,
    load_manifest,
)
from .dyadic import (
    DyadicCube,
    SequenceField,
    dyadic_norm,
    from_sequence,
    neighbors_G,
    retained_generations,
    sequence_norm,
    to_sequence,
)
from .exponents import SpaceSpec, conjugate_exponent, dual_beta, dual_spec
from .grid import (
    BoundaryFunction,
    HalfSpaceField,
    TorusGrid,
    default_grid,
    load_field,
    make_grid,
    save_field,
)
from .interp import (
    KProfile,
    convexity_check,
    embedding_check,
    k_functional_bruteforce,
    k_functional_upper,
    k_profile,
    log_convexity_check,
    nesting_check,
    real_interp_norm,
    tent_real_interp_check,
)
from .kernel import (
    KernelSpec,
    LPFamily,
    default_lp_family,
    gauss_moment_kernel,
    heat_extension,
    heat_kernel,
    kernel_extension,
    lp_block,
    lp_block_kernel,
    peetre_maximal,
    verify_kernel_admissible,
)
from .norms import (
    ScaleBallRegion,
    besov_norm,
    holder_quasi_check,
    huang_norm,
    localization_check,
    pairing,
    t_norm,
    triebel_norm,
    vv_norm,
    z_amenta_norm,
    z_norm,
)
from .report import EquivalenceReport, ReportRow
from .verify import SUITES, SuiteResult, VerifyContext, run_suites
from .whitney import (
    DEFAULT_WINDOW,
    AvgField,
    WhitneyParams,
    box_average,
    box_average_fast,
    change_angle_ratio,
    retained_slices,
)

__version__ = "1.0.0"

__all__ = [
    "AvgField",
    "BoundaryFunction",
    "CorpusEntry",
    "DEFAULT_WINDOW",
    "DyadicCube",
    "EquivalenceReport",
    "HalfSpaceField",
    "KProfile",
    "KernelSpec",
    "LPFamily",
    "ReportRow",
    "SUITES",
    "ScaleBallRegion",
    "SeededStream",
    "SequenceField",
    "SpaceSpec",
    "SuiteResult",
    "TorusGrid",
    "VerifyContext",
    "WhitneyParams",
    "besov_norm",
    "boundary_entries",
    "box_average",
    "box_average_fast",
    "change_angle_ratio",
    "conjugate_exponent",
    "convexity_check",
    "default_grid",
    "default_lp_family",
    "dual_beta",
    "dual_spec",
    "dyadic_norm",
    "embedding_check",
    "from_sequence",
    "gauss_moment_kernel",
    "generate_boundary",
    "generate_halfspace",
    "heat_extension",
    "heat_kernel",
    "holder_quasi_check",
    "huang_norm",
    "k_functional_bruteforce",
    "k_functional_upper",
    "k_profile",
    "kernel_extension",
    "load_field",
    "load_manifest",
    "localization_check",
    "log_convexity_check",
    "lp_block",
    "lp_block_kernel",
    "make_grid",
    "neighbors_G",
    "nesting_check",
    "pairing",
    "peetre_maximal",
    "real_interp_norm",
    "retained_generations",
    "retained_slices",
    "run_suites",
    "save_field",
    "sequence_norm",
    "t_norm",
    "tent_real_interp_check",
    "to_sequence",
    "triebel_norm",
    "verify_kernel_admissible",
    "vv_norm",
    "z_amenta_norm",
    "z_norm",
]
