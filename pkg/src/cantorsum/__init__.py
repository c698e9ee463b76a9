"""Witness search for zero Hausdorff measure of sums of affine Cantor sets.

The sum C_lambda + eta C_gamma has zero measure in dimension
d_lambda + d_gamma exactly when, for every eps, two distinct eps-squares
sit eps-close to each other.  This package searches for such pairs with
exact verification, builds new pairs from old ones, and applies the
search to projections of Cantor products.
"""

__version__ = "0.1.0"

from .errors import (
    BudgetExceeded,
    CantorSumError,
    CertificateError,
    DegenerateSystem,
    DomainError,
    EmptySystem,
    EpsilonTooLarge,
    InvalidDigit,
    InvalidOrientation,
    NoConvergence,
    NonpositiveEta,
    NoSharedSquare,
    OrientationMismatch,
    ParseError,
    RatioOutOfRange,
    SearchExhausted,
    WitnessUnavailable,
)
from .ifs import (
    AffineCantorSystem,
    ContractionMap,
    SumSystem,
    WordStats,
    convex_hull,
    homogeneous_system,
    middle_set,
    similarity_dimension,
    sum_endpoint,
    validate_system,
    word_stats,
)
from .squares import (
    Certification,
    ClosenessVerdict,
    CylinderSquare,
    NotFound,
    SearchBudget,
    WitnessPair,
    certify_zero,
    corner_witness,
    find_witness,
    homogeneous_corner_witness,
    is_delta_square,
    make_square,
    make_witness,
    relative_closeness,
    verify_witness,
)
from .lemmas import (
    amplify,
    concat_left,
    concat_left_bound,
    concat_right,
    concat_right_bound,
    find_padding,
    refine_to_squares,
    transitivity_bound,
)
from .measure import (
    CylinderMeasure,
    covering_sum,
    cylinder_measure,
    density_estimate,
    pigeonhole_bound,
    r_square_decomposition,
)
from .atlas import (
    AtlasRecord,
    RegionLabel,
    difference_thickness,
    middle_set_classify,
    scale_gamma,
    scan_projections,
    thickness,
)
from .formats import load_sum_system, parse_sum_system, sum_system_to_dict

import types as _types

__all__ = [n for n, v in list(globals().items()) if not n.startswith("_") and not isinstance(v, _types.ModuleType)]
