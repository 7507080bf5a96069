import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from ..cf_state import ModelParams, VehicleState, StepSize
from ..principles import safe_stopping_distance
from ..utility.exceptions import DomainError


@dataclass(frozen=True)
class GippsBrakingSolution:
    params: ModelParams
    v0: float
    z0: float

    def _root(self, z):
        p = self.params
        return math.sqrt(p.beta * p.beta * p.tau_brake * p.tau_brake + 2 * p.beta * (z - p.zeta))


def gipps_braking_solution(params, v0):
    if not (0 < v0 <= params.mu):
        raise DomainError("initial speed %g outside (0, %g]" % (v0, params.mu))
    z0 = params.zeta + v0 * params.tau_brake + v0 * v0 / (2 * params.beta)
    return GippsBrakingSolution(params, v0, z0)


def gipps_time_of_spacing(sol, z):
    p = sol.params
    if not z > p.zeta:
        raise DomainError("time of spacing undefined for z=%g <= %g" % (z, p.zeta))
    if z > sol.z0:
        raise DomainError("spacing %g beyond initial spacing %g" % (z, sol.z0))
    if z == sol.z0:
        return 0.0
    bt = p.beta * p.tau_brake
    root = sol._root(z)
    return -root / p.beta - p.tau_brake * math.log(abs((bt - root) / sol.v0)) + \
        (sol.v0 + bt) / p.beta


def gipps_speed_of_spacing(sol, z):
    p = sol.params
    if z < p.zeta:
        raise DomainError("speed of spacing undefined for z=%g < %g" % (z, p.zeta))
    return -p.beta * p.tau_brake + sol._root(z)


def gipps_accel_of_spacing(sol, z):
    p = sol.params
    if z < p.zeta:
        raise DomainError("acceleration of spacing undefined for z=%g < %g" % (z, p.zeta))
    return -p.beta + p.beta * p.beta * p.tau_brake / sol._root(z)


def gipps_spacing_at_time(sol, t):
    if t < 0:
        raise DomainError("negative time %g" % t)
    if t == 0:
        return sol.z0
    lo = sol.params.zeta * (1 + 1e-12) + 1e-12
    return brentq(lambda z: gipps_time_of_spacing(sol, z) - t, lo, sol.z0, xtol=1e-13, rtol=1e-15)


def stopping_identities(params, v):
    # the braking solution starts exactly one safe stopping distance beyond the comfort spacing
    sol = gipps_braking_solution(params, v)
    ssd = safe_stopping_distance(v, params)
    return {
        "safe_stopping_distance": ssd,
        "z0_minus_zeta": sol.z0 - params.zeta,
        "abs_error": abs(sol.z0 - params.zeta - ssd),
    }


def simulate_braking(sol, eps, t_end):
    from ..cf_executor import LeaderProfile, Scenario, run
    from ..models.model_types import ModelId

    sc = Scenario(ModelId.GippsSimplified, sol.params, StepSize(eps), t_end,
                  VehicleState(0.0, sol.v0), LeaderProfile.stationary(sol.z0))
    return run(sc)


def convergence_study(params, v0, eps_list, horizon=10.0):
    sol = gipps_braking_solution(params, v0)
    z_ref = gipps_spacing_at_time(sol, horizon)
    rows = []
    for eps in eps_list:
        traj = simulate_braking(sol, eps, horizon)
        z_sim = float(traj.z[-1])
        rows.append({
            "eps": eps,
            "t": float(traj.t[-1]),
            "z_simulated": z_sim,
            "z_closed_form": z_ref,
            "error": abs(z_sim - z_ref),
        })
    ratios = [rows[i + 1]["error"] / rows[i]["error"] for i in range(len(rows) - 1)]
    return {"horizon": horizon, "rows": rows, "ratios": ratios}


def _entry(quantity, simulated, closed_form):
    abs_error = abs(simulated - closed_form)
    rel_error = abs_error / abs(closed_form) if closed_form != 0 else abs_error
    return {
        "quantity": quantity,
        "simulated": simulated,
        "closed_form": closed_form,
        "abs_error": abs_error,
        "rel_error": rel_error,
    }


def braking_oracle_table(params, v0, eps=1e-4, t_end=40.0, samples=10):
    sol = gipps_braking_solution(params, v0)
    traj = simulate_braking(sol, eps, t_end)
    n = len(traj)

    # speed planned at row i lands at row i + 1, at spacing z[i + 1]
    z_next = traj.z[1:n]
    v_next = traj.v_f[1:n]
    v_ref = np.array([gipps_speed_of_spacing(sol, float(z)) for z in z_next])
    sup_speed = float(np.max(np.abs(v_next - v_ref)))

    table = []
    rows = np.flatnonzero(traj.z[:n] >= params.zeta + 1.0)
    for i in np.linspace(0, len(rows) - 1, samples).astype(int):
        i = int(rows[i])
        z = float(traj.z[i])
        table.append(_entry("t(z=%.6g)" % z, float(traj.t[i]), gipps_time_of_spacing(sol, z)))
        if i + 1 < n:
            table.append(_entry("v(z=%.6g)" % float(traj.z[i + 1]), float(traj.v_f[i + 1]),
                                gipps_speed_of_spacing(sol, float(traj.z[i + 1]))))
        if i > 0:
            table.append(_entry("a(z=%.6g)" % z, float(traj.a_cmd[i]), gipps_accel_of_spacing(sol, z)))
    return {
        "v0": v0,
        "z0": sol.z0,
        "eps": eps,
        "speed_sup_norm": sup_speed,
        "table": table,
    }
