"""Exact slope-profile calculus, spectral limit measures, and volume/cone
computations for projectivized bundles over a smooth curve."""

from .cones import (
    ClassVector,
    ConeMembership,
    PolyCone,
    TriForm,
    class_vector,
    cone_membership,
    cones_split_rank2_picard1,
    cones_split_rank2_ruled,
    discriminant_end,
    duality_check,
    eff_cone_semistable,
    eff_cone_split_rank3_picard1,
    grothendieck_residuals,
    triform_pe_over_surface,
)
from .measures import (
    PiecewiseCDF,
    SpectralMeasure,
    W1Estimate,
    bspline_measure,
    cdf,
    convolve,
    dilate,
    dirac,
    integrate_plus,
    limit_measure,
    make_measure,
    sample_table,
    slope_measure,
    translate,
    w1_distance,
)
from .poly import Poly
from .profiles import (
    HNProfile,
    ProfileStats,
    make_profile,
    profile_stats,
    slope_vector,
    sym_profile,
    tensor_profile,
    tensor_profile_bruteforce,
    trivial_profile,
    twist_profile,
)
from .volume import (
    BundleInput,
    InternalInvariantError,
    VolumeReport,
    discrete_slope_measure,
    generic_fiber_volume,
    limit_measure_for,
    volume_discrete_oracle,
    volume_exact,
)

__version__ = "0.1.0"

__all__ = [
    "BundleInput",
    "ClassVector",
    "ConeMembership",
    "HNProfile",
    "InternalInvariantError",
    "PiecewiseCDF",
    "Poly",
    "PolyCone",
    "ProfileStats",
    "SpectralMeasure",
    "TriForm",
    "VolumeReport",
    "W1Estimate",
    "bspline_measure",
    "cdf",
    "class_vector",
    "cone_membership",
    "cones_split_rank2_picard1",
    "cones_split_rank2_ruled",
    "convolve",
    "dilate",
    "dirac",
    "discrete_slope_measure",
    "discriminant_end",
    "duality_check",
    "eff_cone_semistable",
    "eff_cone_split_rank3_picard1",
    "generic_fiber_volume",
    "grothendieck_residuals",
    "integrate_plus",
    "limit_measure",
    "limit_measure_for",
    "make_measure",
    "make_profile",
    "profile_stats",
    "sample_table",
    "slope_measure",
    "slope_vector",
    "sym_profile",
    "tensor_profile",
    "tensor_profile_bruteforce",
    "translate",
    "triform_pe_over_surface",
    "trivial_profile",
    "twist_profile",
    "volume_discrete_oracle",
    "volume_exact",
    "w1_distance",
]
