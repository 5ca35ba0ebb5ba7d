"""Gromov-Hausdorff toolkit for finite metric spaces.

Builds grid models of segments, circles and whisker graphs, measures
correspondence distortion, certifies two-sided distance bounds, solves
small instances exactly, and reproduces the closed-form segment-circle
distance curve with explicit numerical slack.
"""
from .bounds import (
    BoundOptions,
    BoundRecord,
    best_bounds,
    diam_diff_lower,
    find_diametral_involution,
    full_product,
    homogeneity_lower,
    involution_lower,
    line_image_upper,
    max_diam_upper,
    round_lower,
    single_point_exact,
)
from .correspondences import (
    Correspondence,
    DistortionRegion,
    PLCorrespondence,
    distortion,
    distortion_bound_holds,
    is_correspondence,
    nearest_point_correspondence,
    pair_distortion,
    pl_distortion,
    pl_sample,
    wrap_image_angle,
    wrap_once,
    wrap_triple,
)
from .errors import ToolkitError
from .exact import (
    SearchOptions,
    SearchResult,
    enumerate_correspondences,
    gh_exact,
    min_distortion_exhaustive,
    verify_optimum,
)
from .models import (
    MetricGraph,
    WhiskerComplex,
    antipodal_map,
    circle_angles,
    circle_space,
    segment_positions,
    segment_space,
    shortest_path_metric,
    whisker_graph,
)
from .nonlinearity import (
    LipschitzWitness,
    antipodal_lower_bound,
    basepoint_witness,
    line_image,
    nonlinearity_degree_exact,
    nonlinearity_degree_upper,
    normalized_witness,
    validate_antipodal_involution,
    witness_objective,
)
from .segment_circle import (
    DEFAULT_GRIDS,
    CertificateResult,
    GridParams,
    RegimeReport,
    certificate,
    gh_formula,
    lower_bound,
    regime,
    report,
    sweep,
)
from .spaces import (
    FiniteMetricSpace,
    PointSubset,
    diameter,
    eccentricity,
    hausdorff_distance,
    is_homogeneous,
    is_round,
    is_separated,
    min_eccentricity,
    point_set_distance,
    scale,
    validate_metric,
)

__version__ = "0.1.0"

__all__ = [
    "BoundOptions",
    "BoundRecord",
    "CertificateResult",
    "Correspondence",
    "DEFAULT_GRIDS",
    "DistortionRegion",
    "FiniteMetricSpace",
    "GridParams",
    "LipschitzWitness",
    "MetricGraph",
    "PLCorrespondence",
    "PointSubset",
    "RegimeReport",
    "SearchOptions",
    "SearchResult",
    "ToolkitError",
    "WhiskerComplex",
    "antipodal_lower_bound",
    "antipodal_map",
    "basepoint_witness",
    "best_bounds",
    "certificate",
    "circle_angles",
    "circle_space",
    "diam_diff_lower",
    "diameter",
    "distortion",
    "distortion_bound_holds",
    "eccentricity",
    "enumerate_correspondences",
    "find_diametral_involution",
    "full_product",
    "gh_exact",
    "gh_formula",
    "hausdorff_distance",
    "homogeneity_lower",
    "involution_lower",
    "is_correspondence",
    "is_homogeneous",
    "is_round",
    "is_separated",
    "line_image",
    "line_image_upper",
    "lower_bound",
    "max_diam_upper",
    "min_distortion_exhaustive",
    "min_eccentricity",
    "nearest_point_correspondence",
    "nonlinearity_degree_exact",
    "nonlinearity_degree_upper",
    "normalized_witness",
    "pair_distortion",
    "pl_distortion",
    "pl_sample",
    "point_set_distance",
    "regime",
    "report",
    "round_lower",
    "scale",
    "segment_positions",
    "segment_space",
    "shortest_path_metric",
    "single_point_exact",
    "sweep",
    "validate_antipodal_involution",
    "validate_metric",
    "verify_optimum",
    "whisker_graph",
    "witness_objective",
    "wrap_image_angle",
    "wrap_once",
    "wrap_triple",
]
