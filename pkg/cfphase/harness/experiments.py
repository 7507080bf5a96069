import math
import os
from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from .report import report_meta, build_report, write_report
from ..cf_executor import LeaderProfile, Scenario, run, settle_time
from ..cf_state import ModelParams, VehicleState, StepSize
from ..models.model_types import ModelId
from ..oracles.gipps_braking import braking_oracle_table
from ..oracles.idm_linear import idm_linearize
from ..phase.labels import PhaseLabel
from ..principles import (
    PrincipleId,
    ZEROTH_FIRST_ORDER,
    audit_trajectory,
    braking_onset,
    safe_stopping_distance
)
from ..utility.csv_util import format_float, write_csv
from ..utility.exceptions import UnknownExperiment
from ..utility.log_util import log_info, log_warn

PHASE_PLANE_HEADER = ["t", "v", "z", "a", "phase"]
PHASE_PLANE_MAX_ROWS = 20000


@dataclass
class Finding:
    name: str
    observed: object
    expected: object
    comparator: str
    tolerance: float = 0.0
    asserted: bool = True
    note: str = ""

    @property
    def passed(self):
        obs = self.observed
        if self.comparator == "is":
            return obs == self.expected
        if obs is None or (isinstance(obs, float) and math.isnan(obs)):
            return False
        if self.comparator == "approx":
            return abs(obs - self.expected) <= self.tolerance
        if self.comparator == "lt":
            return obs < self.expected
        if self.comparator == "le":
            return obs <= self.expected
        if self.comparator == "gt":
            return obs > self.expected
        if self.comparator == "ge":
            return obs >= self.expected
        raise ValueError("unknown comparator %s" % self.comparator)

    def as_dict(self):
        return {
            "name": self.name,
            "observed": self.observed,
            "expected": self.expected,
            "comparator": self.comparator,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "asserted": self.asserted,
            "note": self.note,
        }


class ReplicationBundle(object):
    def __init__(self, name):
        self.name = name
        self.trajectories = OrderedDict()
        self.reports = OrderedDict()
        self.findings = []
        self.extras = OrderedDict()
        self.meta = dict()

    def __str__(self):
        failed = len(self.failed_findings())
        return "<ReplicationBundle %s, %d findings, %d failed>" % (
            self.name, len(self.findings), failed)

    def __repr__(self):
        return self.__str__()

    def add_run(self, key, traj, params):
        self.trajectories[key] = traj
        self.reports[key] = audit_trajectory(traj, params)
        return self.reports[key]

    def add(self, *findings):
        for f in findings:
            log_info("%s/%s: observed %s, expected %s %s (%s)", self.name, f.name, f.observed,
                     f.comparator, f.expected, "ok" if f.passed else "FAILED")
            self.findings.append(f)

    def finding(self, name):
        for f in self.findings:
            if f.name == name:
                return f
        raise KeyError(name)

    def failed_findings(self):
        return [f for f in self.findings if f.asserted and not f.passed]

    def all_asserted_passed(self):
        return len(self.failed_findings()) == 0

    def document(self):
        meta = report_meta(experiment=self.name, **self.meta)
        aggregates = {
            "asserted": sum(1 for f in self.findings if f.asserted),
            "failed": len(self.failed_findings()),
            "compliance": {k: self.reports[k].as_dict() for k in self.reports},
            "runs": {k: self.trajectories[k].metadata() for k in self.trajectories},
        }
        aggregates.update(self.extras)
        return build_report(meta, aggregates=aggregates,
                            findings=[f.as_dict() for f in self.findings])

    def write(self, out_dir):
        os.makedirs(out_dir, exist_ok=True)
        for key, traj in self.trajectories.items():
            traj.write_csv(os.path.join(out_dir, "%s.csv" % key))
            write_phase_plane(os.path.join(out_dir, "%s_phase_plane.csv" % key), traj)
        write_report(os.path.join(out_dir, "findings.json"), self.document())


def write_phase_plane(path, traj):
    n = len(traj)
    stride = max(1, int(math.ceil(n / PHASE_PLANE_MAX_ROWS)))
    rows = []
    for i in range(0, n, stride):
        rows.append([format_float(traj.t[i]), format_float(traj.v_f[i]), format_float(traj.z[i]),
                     format_float(traj.a_cmd[i]), PhaseLabel.from_code(int(traj.phase[i])).name])
    write_csv(path, PHASE_PLANE_HEADER, rows)


def slvp_scenario(model, params, eps, t_end, v0, z0):
    return Scenario(model, params, StepSize(eps), t_end, VehicleState(0.0, v0),
                    LeaderProfile.stationary(z0))


def halt_time_after(traj, start):
    stopped = np.flatnonzero(traj.v_f[start:] <= 0.0)
    if len(stopped) == 0:
        return None
    return float(traj.t[start + stopped[0]] - traj.t[start])


def ba_newell_slvp():
    bundle = ReplicationBundle("ba-newell-slvp")
    params = ModelParams()
    traj = run(slvp_scenario(ModelId.BANewell, params, 0.001, 60.0, 30.0, 55.0))
    report = bundle.add_run("ba-newell-slvp", traj, params)

    settled = settle_time(traj, 0.01, 0.05)
    bundle.add(
        Finding("max_deceleration", float(-np.min(traj.a_cmd)), 18.75, "approx", 0.1),
        Finding("zeroth_first_order_pass", report.all_passed(ZEROTH_FIRST_ORDER), True, "is"),
        Finding("bounded_control_violated", not report.passed(PrincipleId.BoundedControl), True, "is",
                note="equilibrium deceleration has no lower bound"),
        Finding("settle_time", settled, 60.0, "le", note="|v| <= 0.01 m/s and |z - zeta| <= 0.05 m"),
    )
    return bundle


def _bda_onset_findings(bundle, traj, params, prefix, halt_expected, min_expected, asserted):
    onset = braking_onset(traj, params)
    if onset is None:
        bundle.add(Finding(prefix + "braking_onset_found", False, True, "is", asserted=asserted))
        return None
    halt = halt_time_after(traj, onset.index)
    z_min = float(np.min(traj.z))
    bundle.add(
        Finding(prefix + "halt_after_onset", halt, halt_expected, "approx", 0.5, asserted=asserted),
        Finding(prefix + "min_spacing", z_min, min_expected, "approx" if asserted else "le",
                1.0 if asserted else 0.0, asserted=asserted),
    )
    return onset


def bda_newell_collision():
    bundle = ReplicationBundle("bda-newell-collision")

    params = ModelParams(beta=2.0)
    traj = run(slvp_scenario(ModelId.BDANewell, params, 1e-4, 200.0, 30.0, 400.0))
    report = bundle.add_run("bda-newell-collision", traj, params)
    onset = braking_onset(traj, params)
    z_min = float(np.min(traj.z))
    bundle.add(
        Finding("onset_time", onset.t if onset else None, 11.5, "approx", 0.2),
        Finding("onset_spacing", onset.spacing if onset else None, 55.0, "approx", 0.5),
        Finding("onset_speed", onset.speed if onset else None, 30.0, "approx", 0.5),
        Finding("collision", z_min, 0.0, "lt"),
        Finding("min_spacing_bound", z_min, -150.0, "le"),
        Finding("halt_after_onset", halt_time_after(traj, onset.index) if onset else None,
                30.0 / params.beta, "approx", 0.5, note="v0 / beta"),
        Finding("terminal_spacing", float(traj.z[-1]), 7.0, "approx", 0.1),
        Finding("minimum_jam_spacing_violated",
                not report.passed(PrincipleId.MinimumJamSpacing), True, "is"),
        Finding("forward_traveling_violated",
                not report.passed(PrincipleId.ForwardTraveling), True, "is", asserted=False),
    )

    # default deceleration bound: halts 18 s after onset, minimum spacing -214.5 m
    params = ModelParams()
    traj = run(slvp_scenario(ModelId.BDANewell, params, 1e-3, 60.0, 30.0, 400.0))
    bundle.add_run("bda-newell-collision-beta-1.67", traj, params)
    _bda_onset_findings(bundle, traj, params, "beta_1.67_", 18.0, -214.5, True)

    # stronger braking stops at the minimum jam spacing and backs up to zeta
    params = ModelParams(beta=9.0)
    traj = run(slvp_scenario(ModelId.BDANewell, params, 1e-3, 60.0, 30.0, 400.0))
    bundle.add_run("bda-newell-collision-beta-9", traj, params)
    bundle.add(
        Finding("beta_9_min_spacing", float(np.min(traj.z)), params.zeta_min, "approx", 0.1,
                asserted=False, note="no time stamps available for this run"),
        Finding("beta_9_terminal_spacing", float(traj.z[-1]), params.zeta, "approx", 0.1, asserted=False),
    )
    bundle.meta["variants"] = ["beta=2 (eps=1e-4)", "beta=1.67 (eps=1e-3)", "beta=9 (eps=1e-3)"]
    return bundle


def idm_slvp():
    bundle = ReplicationBundle("idm-fig2")
    params = ModelParams(mu=120 / 3.6)
    traj = run(slvp_scenario(ModelId.IDM, params, 1e-3, 125.0, 0.0, 2500.0))
    report = bundle.add_run("idm-fig2", traj, params)
    onset = report.onset

    ssd_limit = safe_stopping_distance(params.mu, params)
    lin = idm_linearize(params)
    upper = lin.eigenvalues[1]
    bundle.add(
        Finding("peak_speed", float(np.max(traj.v_f)), params.mu, "lt"),
        Finding("onset_spacing", onset.spacing if onset else None, 1000.0, "gt"),
        Finding("min_speed", float(np.min(traj.v_f)), 0.0, "lt"),
        Finding("terminal_speed", float(traj.v_f[-1]), 0.0, "approx", 0.01),
        Finding("terminal_spacing", float(traj.z[-1]), params.zeta, "approx", 0.05),
        Finding("ssd_at_speed_limit", ssd_limit, 366.0, "approx", 1.0),
        Finding("onset_to_ssd_ratio", onset.ratio if onset else None, 2.5, "ge",
                note="onset spacing over safe stopping distance at the onset speed"),
        Finding("onset_to_ssd_limit_ratio", onset.spacing / ssd_limit if onset else None, 2.5, "ge",
                note="onset spacing over safe stopping distance at the speed limit"),
        Finding("forward_traveling_violated",
                not report.passed(PrincipleId.ForwardTraveling), True, "is"),
        Finding("eigenvalue_real", upper.real, -0.584, "approx", 1e-3),
        Finding("eigenvalue_imag", abs(upper.imag), 0.624, "approx", 1e-3),
        Finding("settle_time", settle_time(traj, 0.01, 0.05), 125.0, "le"),
    )
    bundle.extras["linearization"] = lin.as_dict()
    return bundle


def gipps_slvp():
    bundle = ReplicationBundle("gipps-fig2")
    params = ModelParams(mu=120 / 3.6)
    traj = run(slvp_scenario(ModelId.GippsSimplified, params, 1e-3, 140.0, 0.0, 2500.0))
    bundle.add_run("gipps-fig2", traj, params)

    safe = np.flatnonzero(traj.phase == PhaseLabel.GippsSafeBranch.code)
    stopping = float(traj.x_f[-1] - traj.x_f[safe[0]]) if len(safe) else None
    bundle.add(
        Finding("peak_speed", float(np.max(traj.v_f)), 30.0, "approx", 0.3),
        Finding("stopping_distance", stopping, 301.0, "approx", 3.0,
                note="from the first safe-branch decision to rest"),
        Finding("min_acceleration", float(np.min(traj.a_cmd)), -1.6, "approx", 0.1),
        Finding("min_speed", float(np.min(traj.v_f)), -1e-9, "ge"),
        Finding("acceleration_bound", float(np.min(traj.a_cmd)), -params.beta - 1e-6, "ge"),
        Finding("terminal_spacing", float(traj.z[-1]), params.zeta, "approx", 0.05),
    )

    table = braking_oracle_table(params, 30.0, eps=1e-4)
    bundle.add(Finding("oracle_speed_sup_norm", table["speed_sup_norm"], 1e-2, "le",
                       note="simulated v(z) against the closed form on the braking segment"))
    bundle.extras["oracle"] = table
    return bundle


experiments = OrderedDict([
    ("ba-newell-slvp", ba_newell_slvp),
    ("bda-newell-collision", bda_newell_collision),
    ("idm-fig2", idm_slvp),
    ("gipps-fig2", gipps_slvp),
])


def replicate(name, out_dir=None):
    if name not in experiments:
        raise UnknownExperiment(name)
    bundle = experiments[name]()
    if not bundle.all_asserted_passed():
        log_warn("%s: %d asserted findings failed", name, len(bundle.failed_findings()))
    if out_dir is not None:
        bundle.write(out_dir)
    return bundle
