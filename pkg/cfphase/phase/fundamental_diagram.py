from dataclasses import dataclass

import numpy as np

from ..cf_state import VehicleState, StepSize
from ..models.model_types import ModelId, NEWELL_FAMILY, GIPPS_FAMILY
from ..settings import Settings
from ..utility.csv_util import format_float, write_csv
from ..utility.exceptions import ConfigError, UnsupportedModel, NoSteadyState
from ..utility.log_util import log_debug

FD_HEADER = ["k", "v", "q"]


@dataclass(frozen=True)
class FDPoint:
    k: float
    v: float
    q: float


def _congested_time(model_id, params):
    if model_id in NEWELL_FAMILY:
        return params.tau
    if model_id in GIPPS_FAMILY:
        return params.tau_brake
    raise UnsupportedModel(model_id, "closed-form fundamental diagram")


def _check_density(k, params):
    if not (k > 0 and k <= params.kappa * (1 + 1e-12)):
        raise ConfigError("density %g outside (0, %g]" % (k, params.kappa), "densities")


def steady_speed(model_id, params, k):
    tau = _congested_time(model_id, params)
    _check_density(k, params)
    clearance = 1.0 / k - params.zeta
    if abs(clearance) <= 1e-12 * params.zeta:
        clearance = 0.0  # jam density
    return max(0.0, min(params.mu, clearance / tau))


def fundamental_diagram(model_id, params, densities):
    _congested_time(model_id, params)
    res = []
    for k in densities:
        k = float(k)
        v = steady_speed(model_id, params, k)
        res.append(FDPoint(k, v, k * v))
    return res


def wave_speed(model_id, params):
    # slope magnitude of the congested branch q = (1 - k zeta) / tau
    return params.zeta / _congested_time(model_id, params)


def breakpoint_density(model_id, params):
    return 1.0 / (params.mu * _congested_time(model_id, params) + params.zeta)


def fd_from_simulation(model_id, params, k, vehicles=3):
    from ..cf_executor import LeaderProfile, run_platoon

    _congested_time(model_id, params)
    _check_density(k, params)
    s = Settings()
    eps = s.get_double("cfphase.fd.step")
    run_time = s.get_double("cfphase.fd.run_time")
    window = s.get_double("cfphase.fd.window")
    steady_tol = s.get_double("cfphase.fd.steady_tolerance")

    v = steady_speed(model_id, params, k)
    gap = 1.0 / k
    lead = LeaderProfile.piecewise(0.0, [(0.0, v)])
    initial = [VehicleState(-(i + 1) * gap, v) for i in range(vehicles)]
    trajs = run_platoon(model_id, params, StepSize(eps), vehicles, initial, lead, run_time)

    spread = 0.0
    for traj in trajs:
        if traj.truncated:
            raise NoSteadyState(k, float("inf"))
        tail = traj.v_f[traj.t >= traj.t[-1] - window]
        spread = max(spread, float(np.max(tail) - np.min(tail)))
    log_debug("fd %s k=%g: spread %g", model_id, k, spread)
    if spread > steady_tol:
        raise NoSteadyState(k, spread)

    last = trajs[-1]
    v_meas = float(np.mean(last.v_f[last.t >= last.t[-1] - window]))
    return FDPoint(k, v_meas, k * v_meas)


def write_fd(path, points):
    write_csv(path, FD_HEADER, [
        [format_float(p.k), format_float(p.v), format_float(p.q)] for p in points])
