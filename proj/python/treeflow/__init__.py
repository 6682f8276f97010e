"""Translation semigroups on weighted Lp spaces over directed metric trees.

Thin re-export of the compiled core. Build trees and weight families from the
same JSON spec strings the command line tool accepts, then drive translations,
admissibility checks, criteria and proof objects directly.
"""

from treeflow._core import (
    AdmissibilityFit,
    AdmissibilityReport,
    CriterionReport,
    DirectedTree,
    EdgeCriterion,
    GridFunction,
    HalfLineFunction,
    LpConfig,
    NegativeCertificate,
    OrbitApproach,
    OrbitProbeResult,
    TreeflowError,
    TruncationError,
    Witness,
    WeightFamily,
    add_scaled,
    build_norm_violator,
    build_tree,
    build_weights,
    build_witness_rooted,
    build_witness_unrooted,
    check_admissibility,
    check_disnorm,
    check_norm_bound,
    check_semigroup_law,
    classical_criterion,
    classical_norm,
    classical_translate,
    classical_weight,
    evaluate_criterion,
    fit_admissibility,
    holder_infimum,
    max_abs_difference,
    max_threads,
    min_weight,
    negative_certificate,
    norm,
    orbit_density_probe,
    parse_grid_function,
    phi,
    random_test_function,
    set_max_threads,
    strong_continuity_trend,
    translate,
    translate_interp,
)

__all__ = [
    "AdmissibilityFit",
    "AdmissibilityReport",
    "CriterionReport",
    "DirectedTree",
    "EdgeCriterion",
    "GridFunction",
    "HalfLineFunction",
    "LpConfig",
    "NegativeCertificate",
    "OrbitApproach",
    "OrbitProbeResult",
    "TreeflowError",
    "TruncationError",
    "Witness",
    "WeightFamily",
    "add_scaled",
    "build_norm_violator",
    "build_tree",
    "build_weights",
    "build_witness_rooted",
    "build_witness_unrooted",
    "check_admissibility",
    "check_disnorm",
    "check_norm_bound",
    "check_semigroup_law",
    "classical_criterion",
    "classical_norm",
    "classical_translate",
    "classical_weight",
    "evaluate_criterion",
    "fit_admissibility",
    "holder_infimum",
    "max_abs_difference",
    "max_threads",
    "min_weight",
    "negative_certificate",
    "norm",
    "orbit_density_probe",
    "parse_grid_function",
    "phi",
    "random_test_function",
    "set_max_threads",
    "strong_continuity_trend",
    "translate",
    "translate_interp",
]

__version__ = "0.1.0"
