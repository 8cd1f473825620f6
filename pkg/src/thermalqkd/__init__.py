"""Secret-key rates and security thresholds for thermal continuous-variable QKD.

One-way and two-way (ON configuration) protocols under collective
entangling-cloner attacks, in direct and reverse reconciliation.
"""

from .exceptions import (
    BracketError,
    DomainError,
    NumericError,
    PhysicalityError,
    SingularityError,
    ThermalQKDError,
)
from .gaussian import (
    condition_on_homodyne,
    epr_cm,
    h_function,
    symplectic_eigenvalues,
    thermal_cm,
    von_neumann_entropy,
)
from .oneway import (
    OneWayParams,
    eve_cm_oneway,
    excess_noise_from_w,
    lambda_fn,
    mutual_info_oneway,
    rate_dr_oneway_asym,
    rate_oneway_numeric,
    rate_rr_oneway_asym,
    w_from_excess_noise,
)
from .rates import Direction, RateBreakdown, rate_function
from .thresholds import (
    AttenuationModel,
    FrequencyThreshold,
    ThermalEnvironment,
    distance_from_transmission,
    max_secure_distance,
    solve_oneway_crossing,
    solve_threshold_excess_noise,
    solve_threshold_frequency,
    solve_threshold_transmission,
    solve_threshold_w,
    transmission_from_distance,
    v0_from_environment,
)
from .twoway import (
    EveCM4Params,
    TwoWayParams,
    bob_output_variance,
    eve_cm_twoway,
    mutual_info_twoway,
    rate_dr_twoway_asym,
    rate_rr_twoway_asym,
    rate_twoway_numeric,
    rr_conditional_correlations,
)

__version__ = "0.1.0"
