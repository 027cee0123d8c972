"""Exact reduced residue invariants of algebraic surfaces.

Torus localization on Hilbert schemes of points of toric test surfaces,
universal-polynomial fitting over the four Chern numbers, Picard-variety
wedge invariants, and the purity bound checkers.  All arithmetic is exact.
"""

from .algebra import (
    MultiPoly,
    TruncatedSeries,
    coefficient_of,
    evaluate,
    fraction_from_str,
    fraction_to_str,
    series_invert,
)
from .cache import UniversalCache, cache_load, cache_store, default_cache_dir
from .engine import (
    FitConfig,
    Integrand,
    InvariantValue,
    UniversalPolynomial,
    build_integrand,
    bundle_chi,
    config_magnitude,
    direct_invariant,
    fit_universal,
    fit_universal_default,
    generate_training_configs,
    linear_system_invariant,
    make_config,
    monomial_exponents,
    point_insertion_invariant,
    topology_of,
)
from .errors import (
    CacheError,
    CacheMissError,
    CatalogError,
    HoldoutResidualError,
    InternalComputationError,
    RankDeficiencyError,
    ResLocError,
    SeriesInversionError,
    UnsupportedScopeError,
    ValidationError,
)
from .hilb import (
    DEFAULT_SEED,
    HilbFixedPoint,
    Partition,
    fixed_points_json,
    hilb_fixed_points,
    localization_integral,
    partitions_of,
    tangent_weights,
    taut_weights,
)
from .picard import (
    ExtElem,
    H1Model,
    abelian_model,
    catalog_h1_model,
    load_h1_model,
    pic_pushforward,
    product_curve_p1_model,
    wedge_invariants,
)
from .surface_arithmetic import (
    SplittingData,
    SurfaceTopology,
    arithmetic_genus,
    euler_char_L,
    hodge_index_max_square,
    purity_chi_bound,
    reduced_virtual_dim,
    splitting_lower_bound,
)
from .toric import (
    ClassData,
    EquivariantLineBundle,
    FixedChart,
    ToricSurfaceModel,
    build_surface,
    chart_weights_compatible,
    h0_dimension,
    h2_vanishes,
    intersection_numbers,
    is_nef,
    line_bundle,
    retwist,
)

__version__ = "0.1.0"
