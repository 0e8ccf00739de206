"""blowup-lab: blow-up criteria, functional identities, and two-sided decay
bounds for compressible flows with constant and degenerate viscosities.
"""

__version__ = "0.1.0"

from .errors import (
    BlowupLabError,
    ConfigError,
    InconsistentDataError,
    InsufficientDataError,
    InvalidInputError,
    MissingInputError,
    NumericsError,
    OutOfRegimeError,
)
from .gas_state import (
    ConstantViscosity,
    DecayReport,
    Degenerate,
    DensitySpec,
    Euler,
    FlowState,
    GasModel,
    Grid,
    ProfileSpec,
    VelocitySpec,
    build_initial_data,
    entropy_from_pressure,
    load_table,
    pressure,
    validate_decay,
)
from .functionals import (
    CheminResult,
    FunctionalSnapshot,
    chemin,
    dissipation_rate,
    interpolation_constant,
    snapshot,
    unit_ball_volume,
    viscous_virial,
)
from .criteria import (
    Constants,
    CriterionReport,
    check_cns,
    check_dicns_1d_high_alpha,
    check_dicns_1d_mid_alpha,
    check_dicns_nd,
    check_icns,
    compact_support_lifespan,
    constants_table,
    criterion_rhs,
)
from .blowup_time import BoundCurves, TStarResult, build_bounds, find_tstar
from .simulate import (
    BoundsReport,
    IdentityReport,
    SchemeConfig,
    TimeSeries,
    blowup_indicator,
    run,
    step,
    verify_bounds,
    verify_identities,
)
