"""Certified computations on self-similar iterated function systems.

Adjacency of first-level pieces, n-components, characteristic vectors and
their lexicographic order, with exact (Fraction) or interval arithmetic.
"""
from .attractor import (
    Ball,
    Budget,
    DistanceBounds,
    affine_hull,
    attractor_ball,
    cross_distance,
    diameter_bounds,
    hausdorff_distance_bound,
    invariant_ball,
    periodic_point,
    point_distance,
    refine_cover,
    restrict_to_subspace,
    same_attractor_certificate,
    set_distance,
)
from .charvec import (
    CharVec,
    OrderResult,
    characteristic_vector,
    compare,
    linear_combine,
    precedes_or_equal,
    verify_monotonicity,
)
from .core import (
    IFS,
    OrthogonalMap,
    Similitude,
    cylinder_map,
    fixed_point,
    ifs_compose,
    ifs_power,
    left_quotient,
    similarity_dimension,
)
from .document import parse_document, read_document, serialize
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    IfsError,
    IncompatibleInputs,
    NonContractingError,
    NotSSCError,
    PreconditionError,
    UnsupportedDimension,
    UnsupportedWitnessShape,
    ValidationError,
)
from .harness import (
    BandParams,
    CellPartition,
    HarnessReport,
    choose_band,
    contradiction_trace,
    decomposition_check,
    decomposition_identity,
    min_gap,
    normalize_into_band,
    partition_cells,
    power_chain,
    quotient_ifs,
)
from .render import render_svg
from .separation import (
    CertifiedDisjoint,
    CertifiedIntersect,
    ComponentPartition,
    Undecided,
    adjacency_graph,
    check_osc_witness,
    check_ssc,
    components,
    decide_intersection,
    osc_witness_from_ssc,
    partition,
    verify_component_properties,
)

__version__ = "0.1.0"
