"""Geometric tomography: volume and surface-area bounds from slices and projections."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .polytope import (
    AffineFlat,
    ConvexPolytope,
    PolyconvexSet,
    enumerate_vertices,
    intersect_flat,
    project,
    section_volume,
    union_surface_area,
    union_volume,
    volume,
)
from .slicing import (
    PiecewiseDensity,
    SliceSamples,
    line_interval_count,
    marginal_profile,
    max_slice,
    sample_slices,
    slice_volume,
)
from .fisher import (
    FisherResult,
    check_superadditivity,
    l1_fisher_marginal,
    l1_fisher_piecewise,
    l1_fisher_sampled,
    l1_fisher_surface_form,
    l1_fisher_total,
)
from .brascamp_lieb import BLDatum, FinitenessStatus, john_condition, mg_optimize, validate_datum
from .bounds import (
    BoundReport,
    betke_mcmullen_bounds,
    direction_constant,
    meyer_bound,
    surface_lower_bound,
    surface_lower_bound_general,
    volume_lower_bound,
    volume_upper_bound_projections,
)
from .oracle import OracleConfig, epsilon_tv_quotient, mc_volume, nslice_integral
from .io import load_datum, load_geometry, load_samples
