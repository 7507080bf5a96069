from .gipps_braking import (
    GippsBrakingSolution,
    gipps_braking_solution,
    gipps_time_of_spacing,
    gipps_speed_of_spacing,
    gipps_accel_of_spacing,
    gipps_spacing_at_time,
    stopping_identities,
    convergence_study,
    braking_oracle_table
)
from .idm_linear import (
    LinearizationResult,
    idm_linearize,
    idm_linear_rhs,
    idm_slvp_rhs,
    linear_remainder
)
