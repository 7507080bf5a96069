from . import settings
from .utility.build_info import __version__, build_id
from .cf_state import (
    ModelParams,
    VehicleState,
    PairState,
    StepSize,
    symplectic_step,
    step_from_speed,
    time_gap
)
from .models import ModelId, ModelOutput, model_next, default_step_size
from .phase.labels import PhaseLabel, RegionLabel, region_of
from .principles import (
    PrincipleId,
    ComplianceReport,
    safe_stopping_distance,
    violations_at,
    audit_trajectory,
    braking_onset
)
from .cf_executor import (
    LeaderProfile,
    Scenario,
    Trajectory,
    CFExecutor,
    run,
    run_platoon,
    settle_time
)
from .apis import (
    simulate,
    write_phase_map,
    write_field,
    write_diagram,
    run_sweep,
    replicate,
    gipps_oracle_check,
    idm_oracle_check,
    prove
)
