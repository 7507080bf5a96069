import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .fringe import Fringe, SIMULATED, TRUNCATED, DOMAIN_EXCLUDED, NON_COMPLIANT, STATUSES
from .report import report_meta, build_report
from ..cf_executor import LeaderProfile, Scenario, CLAMP_POLICIES, run
from ..cf_state import PairState, VehicleState, StepSize
from ..models.model_types import ModelId
from ..models.car_following_models import model_next
from ..phase.labels import RegionLabel, region_of
from ..principles import PrincipleId, STEP_PRINCIPLES, audit_trajectory
from ..settings import Settings
from ..utility.exceptions import ConfigError, ModelDomainError
from ..utility.log_util import log_debug, log_info


@dataclass
class SweepSpec:
    model: ModelId
    params: object
    eps: StepSize
    v0_range: tuple
    z0_range: tuple
    v0_count: int
    z0_count: int
    t_end: float
    leader: LeaderProfile = field(default_factory=lambda: LeaderProfile.stationary(0.0))
    principles: frozenset = frozenset(STEP_PRINCIPLES)
    clamp_policy: str = "none"
    compliant_only: bool = False

    def validate(self):
        if not isinstance(self.eps, StepSize):
            self.eps = StepSize(self.eps)
        for name in ("v0_count", "z0_count"):
            count = getattr(self, name)
            if isinstance(count, bool) or not isinstance(count, int) or count < 1:
                raise ConfigError("count must be an integer >= 1", name)
        for name in ("v0_range", "z0_range"):
            lo, hi = getattr(self, name)
            if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
                raise ConfigError("range must be finite with min <= max", name)
        if not (math.isfinite(self.t_end) and self.t_end > 0):
            raise ConfigError("must be positive", "t_end")
        if self.clamp_policy not in CLAMP_POLICIES:
            raise ConfigError("unknown clamp policy '%s'" % self.clamp_policy, "clamp_policy")
        self.principles = frozenset(self.principles)

    def v0_values(self):
        return np.linspace(self.v0_range[0], self.v0_range[1], self.v0_count)

    def z0_values(self):
        return np.linspace(self.z0_range[0], self.z0_range[1], self.z0_count)

    def grid(self):
        return {
            "v0": {"min": self.v0_range[0], "max": self.v0_range[1], "count": self.v0_count},
            "z0": {"min": self.z0_range[0], "max": self.z0_range[1], "count": self.z0_count},
            "cells": self.v0_count * self.z0_count,
            "compliant_only": self.compliant_only,
        }


@dataclass
class Cell:
    index: int
    v0: float
    z0: float
    status: str
    reason: str = ""
    results: dict = field(default_factory=dict)
    terminal: dict = None
    error: dict = None

    def passed(self, principle):
        return self.results[principle.code]["passed"]

    def as_dict(self):
        return {
            "index": self.index,
            "v0": self.v0,
            "z0": self.z0,
            "status": self.status,
            "reason": self.reason,
            "results": self.results,
            "terminal": self.terminal,
            "error": self.error,
        }


def is_compliant_start(v0, z0, params):
    return z0 >= params.zeta and 0 <= v0 <= min(params.mu, (z0 - params.zeta) / params.tau)


def evaluate_cell(spec, index, v0, z0):
    params = spec.params
    if region_of(v0, z0, params) == RegionLabel.InfeasibleNegativeSpeed:
        return Cell(index, v0, z0, DOMAIN_EXCLUDED, "negative initial speed")
    if z0 <= 0:
        return Cell(index, v0, z0, DOMAIN_EXCLUDED, "follower does not start behind the leader")
    if spec.compliant_only and not is_compliant_start(v0, z0, params):
        return Cell(index, v0, z0, NON_COMPLIANT, "initial state outside the compliant set")

    leader = spec.leader.placed_at(z0)
    follower = VehicleState(0.0, v0)
    try:
        model_next(spec.model, PairState.make(0.0, follower, leader.initial_state(), params),
                   params, spec.eps)
    except ModelDomainError as e:
        return Cell(index, v0, z0, DOMAIN_EXCLUDED, e.message)

    traj = run(Scenario(spec.model, params, spec.eps, spec.t_end, follower, leader, spec.clamp_policy))
    report = audit_trajectory(traj, params, spec.principles)
    results = {p.code: {
        "passed": report.results[p].passed,
        "witness": report.results[p].witness.as_dict() if report.results[p].witness else None,
    } for p in PrincipleId if p in report.results}
    n = len(traj)
    terminal = {"t": float(traj.t[n - 1]), "v": float(traj.v_f[n - 1]), "z": float(traj.z[n - 1])}
    status = TRUNCATED if traj.truncated else SIMULATED
    return Cell(index, v0, z0, status, traj.error["message"] if traj.truncated else "",
                results, terminal, traj.error)


def _init_worker(settings):
    Settings().restore(settings)


def _evaluate_cell_job(args):
    return evaluate_cell(*args)


class SweepReport(object):
    def __init__(self, spec, fringe, meta):
        self.spec = spec
        self.fringe = fringe
        self.meta = meta

    def __str__(self):
        return "<SweepReport %s, %d cells>" % (self.spec.model, self.fringe.num_cells)

    def __repr__(self):
        return self.__str__()

    @property
    def cells(self):
        return self.fringe.cells()

    def pass_rate(self, principle):
        audited = [c for c in self.fringe.audited if principle.code in c.results]
        if not audited:
            return None
        return sum(1 for c in audited if c.passed(principle)) / len(audited)

    def failing_cells(self, principle):
        return [c for c in self.fringe.audited
                if principle.code in c.results and not c.passed(principle)]

    def aggregates(self):
        per_principle = dict()
        for p in PrincipleId:
            if p not in self.spec.principles:
                continue
            audited = [c for c in self.fringe.audited if p.code in c.results]
            failed = sum(1 for c in audited if not c.passed(p))
            per_principle[p.code] = {
                "audited": len(audited),
                "failed": failed,
                "pass_rate": (len(audited) - failed) / len(audited) if audited else None,
            }
        counts = self.fringe.counts()
        return {
            "cells": self.fringe.num_cells,
            "status_counts": {s: counts[s] for s in STATUSES},
            "principles": per_principle,
        }

    def as_dict(self):
        return build_report(
            self.meta,
            grid=self.spec.grid(),
            cells=[c.as_dict() for c in self.cells],
            aggregates=self.aggregates())


def sweep(spec, jobs=None):
    spec.validate()
    if jobs is None:
        jobs = Settings().get_integer("cfphase.harness.jobs")

    tasks = []
    index = 0
    for z0 in spec.z0_values():
        for v0 in spec.v0_values():
            tasks.append((spec, index, float(v0), float(z0)))
            index += 1

    log_info("sweep %s: %d cells, %d jobs", spec.model, len(tasks), jobs)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker,
                                 initargs=(Settings().snapshot(), )) as pool:
            cells = list(pool.map(_evaluate_cell_job, tasks))
    else:
        cells = [_evaluate_cell_job(t) for t in tasks]

    fringe = Fringe()
    for cell in sorted(cells, key=lambda c: c.index):
        log_debug("cell %d (v0=%g, z0=%g): %s %s", cell.index, cell.v0, cell.z0, cell.status, cell.reason)
        fringe.add(cell)

    meta = report_meta(
        model=spec.model.key,
        params=spec.params.as_dict(),
        eps=spec.eps.eps,
        t_end=spec.t_end,
        clamp_policy=spec.clamp_policy,
        leader=spec.leader.as_dict(),
        principles=[p.code for p in PrincipleId if p in spec.principles])
    return SweepReport(spec, fringe, meta)
