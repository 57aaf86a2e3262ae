"""Capacity bounds for relay channels whose additive interference is known
noncausally at the relay only.

Covers the full-duplex Gaussian channel (decode-and-forward and
rate-splitting lower bounds, genie-free upper bounds, cut-set and
state-as-noise references), the half-duplex time-division variant, small
finite-alphabet channels, closed-form capacity regimes, and Monte Carlo
verification of the Gaussian coding construction.
"""

from .errors import (
    BadGrouping,
    CardinalityExceeded,
    ConfigError,
    ConstraintViolated,
    DomainError,
    InfeasibleCovariance,
    InvalidFactorization,
    NegativePower,
    NoFeasiblePoint,
    NonPositiveNoise,
    NotDegraded,
    RelayBoundsError,
    SingularCovariance,
)
from .model import (
    BoundPoint,
    CodingParams,
    DmChannel,
    DmCoding,
    GaussianChannel,
    OuterParams,
    TdChannel,
    aux_cardinality_caps,
    db_to_linear,
    linear_to_db,
    validate_channel,
)
from .gaussian import (
    TermBreakdown,
    alpha_opt,
    cutset_objective,
    inner_df_equiv_objective,
    inner_df_objective,
    inner_pdf_objective,
    outer_degraded_equiv_objective,
    outer_degraded_objective,
    outer_objective,
    trivial_inner_objective,
)
from .optimize import (
    OptimizerConfig,
    cutset,
    inner_df,
    inner_pdf,
    maximize_box,
    outer,
    outer_degraded,
    trivial_inner,
)
from .special_cases import (
    Obs1BoundaryReport,
    deaf_helper,
    deaf_helper_regime,
    extreme_p2_zero,
    extreme_q_infinity_degraded,
    extreme_q_infinity_general,
    extreme_q_zero,
    obs1_boundary_check,
    obs1_capacity,
    obs1_threshold,
)
from .half_duplex import td_inner, td_inner_objective, td_outer, td_outer_objective
from .dm import (
    JointPmf,
    dm_cutset,
    dm_inner,
    dm_inner_objective,
    dm_outer,
    dm_outer_degraded,
    dm_outer_objective,
    dump_dm_channel,
    load_dm_channel,
    mutual_information,
)
from .mc import (
    GaussianSampleSet,
    TermCheck,
    VerificationReport,
    mi_logdet,
    sample_construction,
    verify_terms,
)

__version__ = "0.1.0"
