import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .settings import Settings
from .utility.exceptions import DomainError


class PrincipleId(Enum):
    ComfortJamSpacing = "CJS"
    MinimumJamSpacing = "MJS"
    ForwardTraveling = "FT"
    SpeedLimit = "SL"
    MinimumTimeGap = "MTG"
    BoundedControl = "BC"
    SafeStoppingDistance = "SSD"

    @property
    def code(self):
        return self.value

    @property
    def bit(self):
        return _bits[self]

    @staticmethod
    def from_code(code):
        for principle in PrincipleId:
            if principle.value == code or principle.name == code:
                return principle
        raise ValueError("unknown principle %s" % code)


_bits = {principle: 1 << i for i, principle in enumerate(PrincipleId)}

STEP_PRINCIPLES = (
    PrincipleId.ComfortJamSpacing,
    PrincipleId.MinimumJamSpacing,
    PrincipleId.ForwardTraveling,
    PrincipleId.SpeedLimit,
    PrincipleId.MinimumTimeGap,
    PrincipleId.BoundedControl,
)
ZEROTH_FIRST_ORDER = (
    PrincipleId.ComfortJamSpacing,
    PrincipleId.MinimumJamSpacing,
    PrincipleId.ForwardTraveling,
    PrincipleId.SpeedLimit,
    PrincipleId.MinimumTimeGap,
)


def codes_of(mask):
    return [p.code for p in PrincipleId if mask & p.bit]


@dataclass(frozen=True)
class Tolerances:
    length: float = 1e-9
    speed: float = 1e-9
    accel: float = 1e-9

    @staticmethod
    def from_settings():
        s = Settings()
        return Tolerances(
            s.get_double("cfphase.tolerance.length"),
            s.get_double("cfphase.tolerance.speed"),
            s.get_double("cfphase.tolerance.accel"))


@dataclass(frozen=True)
class Violation:
    principle: PrincipleId
    t: float
    observed: float
    bound: float

    def as_dict(self):
        return {
            "principle": self.principle.code,
            "t": self.t,
            "observed": self.observed,
            "bound": self.bound,
        }


def _tol(tol):
    return tol if tol is not None else Tolerances.from_settings()


def check_comfort_jam_spacing(p, params, tol=None):
    return p.spacing >= params.zeta - _tol(tol).length


def check_minimum_jam_spacing(p, params, tol=None):
    return p.spacing >= params.zeta_min - _tol(tol).length


def check_forward_traveling(s, tol=None):
    return s.v >= -_tol(tol).speed


def check_speed_limit(v_next, params, tol=None):
    return v_next <= params.mu + _tol(tol).speed


def check_min_time_gap(p, v_next, params, tol=None):
    return v_next <= (p.spacing - params.zeta) / params.tau + _tol(tol).speed


def bounded_control_limits(v, params):
    return -params.beta, params.alpha * (1 - v / params.mu)


def check_bounded_control(a, v, params, tol=None):
    tol = _tol(tol)
    lo, hi = bounded_control_limits(v, params)
    return lo - tol.accel <= a <= hi + tol.accel


def safe_stopping_distance(v, params):
    if v < 0:
        raise DomainError("safe stopping distance needs a non-negative speed, got %g" % v)
    return v * params.tau_brake + v * v / (2 * params.beta)


def violation_mask(p, output, params, tol):
    mask = 0
    if p.spacing < params.zeta - tol.length:
        mask |= _bits[PrincipleId.ComfortJamSpacing]
    if p.spacing < params.zeta_min - tol.length:
        mask |= _bits[PrincipleId.MinimumJamSpacing]
    if p.follower.v < -tol.speed:
        mask |= _bits[PrincipleId.ForwardTraveling]
    if output is None:
        return mask

    if output.v_next > params.mu + tol.speed:
        mask |= _bits[PrincipleId.SpeedLimit]
    if output.v_next > (p.spacing - params.zeta) / params.tau + tol.speed:
        mask |= _bits[PrincipleId.MinimumTimeGap]
    if output.a < -params.beta - tol.accel or \
            output.a > params.alpha * (1 - p.follower.v / params.mu) + tol.accel:
        mask |= _bits[PrincipleId.BoundedControl]
    return mask


def violations_at(p, output, params, tol=None):
    tol = _tol(tol)
    mask = violation_mask(p, output, params, tol)
    res = []
    for principle in STEP_PRINCIPLES:
        if mask & principle.bit:
            res.append(Violation(principle, p.t, *_observed_bound(
                principle, p.spacing, p.follower.v,
                output.v_next if output is not None else math.nan,
                output.a if output is not None else math.nan,
                params)))
    return res


def _observed_bound(principle, z, v, v_next, a, params):
    if principle == PrincipleId.ComfortJamSpacing:
        return z, params.zeta
    if principle == PrincipleId.MinimumJamSpacing:
        return z, params.zeta_min
    if principle == PrincipleId.ForwardTraveling:
        return v, 0.0
    if principle == PrincipleId.SpeedLimit:
        return v_next, params.mu
    if principle == PrincipleId.MinimumTimeGap:
        return v_next, (z - params.zeta) / params.tau
    lo, hi = bounded_control_limits(v, params)
    return a, (lo if a < lo else hi)


@dataclass
class PrincipleResult:
    principle: PrincipleId
    passed: bool
    witness: Violation = None
    note: str = ""

    def as_dict(self):
        return {
            "principle": self.principle.code,
            "passed": self.passed,
            "witness": self.witness.as_dict() if self.witness is not None else None,
            "note": self.note,
        }


@dataclass
class BrakingOnset:
    index: int
    t: float
    spacing: float
    speed: float
    ssd: float
    ratio: float

    def as_dict(self):
        return {
            "t": self.t,
            "spacing": self.spacing,
            "speed": self.speed,
            "safe_stopping_distance": self.ssd,
            "ratio": self.ratio,
        }


@dataclass
class ComplianceReport:
    results: dict
    onset: BrakingOnset = None
    notes: list = field(default_factory=list)

    def __str__(self):
        failed = [p.code for p in self.results if not self.results[p].passed]
        return "<ComplianceReport %d principles, failed: %s>" % (
            len(self.results), ",".join(failed) if failed else "none")

    def __repr__(self):
        return self.__str__()

    def passed(self, principle):
        return self.results[principle].passed

    def witness(self, principle):
        return self.results[principle].witness

    def all_passed(self, principles=None):
        if principles is None:
            principles = self.results.keys()
        return all(self.results[p].passed for p in principles if p in self.results)

    def as_dict(self):
        return {
            "principles": {p.code: self.results[p].as_dict() for p in PrincipleId if p in self.results},
            "braking_onset": self.onset.as_dict() if self.onset is not None else None,
            "notes": list(self.notes),
        }


def onset_rule_description():
    s = Settings()
    return "commanded acceleration < -%g m/s^2 sustained for >= %g s, stationary leader, moving follower" % (
        s.get_double("cfphase.audit.onset_accel_threshold"),
        s.get_double("cfphase.audit.onset_min_duration"))


def braking_onset(traj, params):
    s = Settings()
    threshold = s.get_double("cfphase.audit.onset_accel_threshold")
    duration = s.get_double("cfphase.audit.onset_min_duration")
    n = len(traj)
    if n == 0:
        return None

    eps = traj.eps
    width = max(1, int(math.ceil(duration / eps - 1e-9)))
    braking = (traj.a_cmd[:n] < -threshold) & \
        (traj.v_l[:n] == 0.0) & (traj.v_f[:n] > 0.0)

    candidates = np.flatnonzero(braking)
    for i in candidates:
        end = min(n, i + width)
        # the deceleration has to last the whole window, or until the run ends
        if end - i < width and end != n:
            continue
        if np.all(traj.a_cmd[i:end] < -threshold):
            speed = float(traj.v_f[i])
            spacing = float(traj.z[i])
            ssd = safe_stopping_distance(speed, params)
            return BrakingOnset(int(i), float(traj.t[i]), spacing, speed, ssd,
                                spacing / ssd if ssd > 0 else math.inf)
    return None


def audit_trajectory(traj, params, checked=None):
    if len(traj) == 0:
        raise DomainError("cannot audit an empty trajectory")
    if checked is None:
        checked = set(PrincipleId)

    n = len(traj)
    masks = traj.violations[:n]
    results = dict()
    for principle in STEP_PRINCIPLES:
        if principle not in checked:
            continue
        hits = np.flatnonzero(masks & principle.bit)
        if len(hits) == 0:
            results[principle] = PrincipleResult(principle, True)
            continue
        # earliest in time, independent of storage order
        i = int(hits[np.argmin(traj.t[hits])])
        observed, bound = _observed_bound(
            principle, float(traj.z[i]), float(traj.v_f[i]),
            float(traj.v_next[i]), float(traj.a_cmd[i]), params)
        results[principle] = PrincipleResult(
            principle, False, Violation(principle, float(traj.t[i]), observed, bound))

    onset = None
    notes = ["MaximumSpeed is the objective of the Newell family and is not audited"]
    if PrincipleId.SafeStoppingDistance in checked:
        factor = Settings().get_double("cfphase.audit.ssd_factor")
        onset = braking_onset(traj, params)
        notes.append("braking onset: " + onset_rule_description())
        if onset is None:
            results[PrincipleId.SafeStoppingDistance] = PrincipleResult(
                PrincipleId.SafeStoppingDistance, True, note="no braking onset")
        elif onset.spacing <= factor * onset.ssd:
            results[PrincipleId.SafeStoppingDistance] = PrincipleResult(
                PrincipleId.SafeStoppingDistance, True,
                note="onset spacing %.6g <= %g x %.6g" % (onset.spacing, factor, onset.ssd))
        else:
            results[PrincipleId.SafeStoppingDistance] = PrincipleResult(
                PrincipleId.SafeStoppingDistance, False,
                Violation(PrincipleId.SafeStoppingDistance, onset.t, onset.spacing, factor * onset.ssd),
                note="onset spacing exceeds %g x safe stopping distance" % factor)
    return ComplianceReport(results, onset, notes)
