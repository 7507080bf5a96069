import os

from .cf_executor import run
from .cf_solver import prove_step_safety, prove_bda_threshold
from .harness.experiments import Finding, replicate as replicate_experiment
from .harness.report import report_meta, build_report, write_report
from .harness.sweep import sweep
from .models.model_types import ModelId
from .oracles.gipps_braking import braking_oracle_table, convergence_study, stopping_identities
from .oracles.idm_linear import STABLE_SPIRAL, idm_linearize, linear_remainder
from .phase.fundamental_diagram import (
    fundamental_diagram,
    fd_from_simulation,
    wave_speed,
    write_fd
)
from .phase.regions import phase_map
from .phase.vector_field import vector_field, write_vector_field
from .utility.log_util import log_info

CONVERGENCE_STEPS = (0.01, 0.005, 0.0025, 0.00125)


def _parent(path):
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)


def simulate(scenario, out=None):
    traj = run(scenario)
    if out is not None:
        _parent(out)
        traj.write_csv(out)
        traj.write_metadata(out + ".meta.json")
        log_info("wrote %d rows to %s", len(traj), out)
    return traj


def write_phase_map(model_id, params, v_range, z_range, counts, eps, out):
    pm = phase_map(model_id, params, v_range, z_range, counts, eps)
    _parent(out)
    pm.write_csv(out)
    pm.write_legend(out + ".legend.json")
    return pm


def write_field(model_id, params, v_range, z_range, counts, eps, out):
    points = vector_field(model_id, params, v_range, z_range, counts, eps)
    _parent(out)
    write_vector_field(out, points)
    return points


def write_diagram(model_id, params, densities, out, simulated=False):
    if simulated:
        points = [fd_from_simulation(model_id, params, k) for k in densities]
    else:
        points = fundamental_diagram(model_id, params, densities)
    _parent(out)
    write_fd(out, points)
    return points


def run_sweep(spec, out=None, jobs=None):
    res = sweep(spec, jobs)
    if out is not None:
        _parent(out)
        write_report(out, res.as_dict())
    return res


def replicate(name, out_dir=None):
    return replicate_experiment(name, out_dir)


def gipps_oracle_check(params, v0):
    table = braking_oracle_table(params, v0)
    study = convergence_study(params, v0, CONVERGENCE_STEPS)
    identity = stopping_identities(params, v0)
    findings = [
        Finding("speed_sup_norm", table["speed_sup_norm"], 1e-2, "le"),
        Finding("stopping_identity", identity["abs_error"], 1e-9, "le"),
        Finding("wave_speed", wave_speed(ModelId.GippsSimplified, params),
                params.zeta / params.tau_brake, "approx", 1e-6),
    ]
    for i, ratio in enumerate(study["ratios"]):
        findings.append(Finding("convergence_ratio_%d" % i, ratio, 0.5, "approx", 0.1))
    doc = build_report(
        report_meta(oracle="gipps", params=params.as_dict(), v0=v0),
        aggregates={"oracle": table, "convergence": study, "stopping_identity": identity},
        findings=[f.as_dict() for f in findings])
    return doc, all(f.passed for f in findings)


def idm_oracle_check(params):
    lin = idm_linearize(params)
    numeric = lin.numeric_eigenvalues()
    drift = max(min(abs(a - b) for b in numeric) for a in lin.eigenvalues)
    r = 0.1
    rem = linear_remainder(params, r, 0.0)
    findings = [
        Finding("closed_form_vs_numeric", drift, 1e-9, "le"),
        Finding("classification", lin.classification, STABLE_SPIRAL, "is", asserted=False),
        Finding("remainder_over_r2", rem / (r * r), 2.0, "le"),
    ]
    doc = build_report(
        report_meta(oracle="idm", params=params.as_dict()),
        aggregates={"linearization": lin.as_dict(),
                    "numeric_eigenvalues": [[e.real, e.imag] for e in numeric]},
        findings=[f.as_dict() for f in findings])
    return doc, all(f.passed for f in findings if f.asserted)


def prove(model_id, params, eps, v0=None):
    if v0 is not None:
        return prove_bda_threshold(params, v0)
    return prove_step_safety(model_id, params, eps)
