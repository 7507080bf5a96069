import math
from dataclasses import dataclass

import numpy as np

from .cf_state import PairState, VehicleState, StepSize, step_from_speed
from .models.model_types import ModelId
from .models.car_following_models import get_model
from .phase.labels import PhaseLabel
from .principles import PrincipleId, Tolerances, violation_mask, codes_of
from .settings import Settings
from .utility import exceptions
from .utility.csv_util import format_float, write_csv
from .utility.json_util import write_json
from .utility.log_util import log_info, log_warn

CLAMP_POLICIES = ("none", "stop-at-zero-speed")
TRAJECTORY_HEADER = ["t", "x_f", "v_f", "a_f", "x_l", "v_l", "z", "phase", "violations"]


class LeaderProfile(object):
    STATIONARY = "stationary"
    PIECEWISE = "piecewise"
    TRAJECTORY = "trajectory"

    def __init__(self, kind, x0=0.0, segments=None, samples=None):
        self.kind = kind
        self.x0 = float(x0)
        self.segments = list(segments) if segments is not None else None
        self.samples = samples
        self._validate()

    def __str__(self):
        if self.kind == LeaderProfile.STATIONARY:
            return "<LeaderProfile stationary at %g>" % self.x0
        if self.kind == LeaderProfile.PIECEWISE:
            return "<LeaderProfile piecewise from %g, %d segments>" % (self.x0, len(self.segments))
        return "<LeaderProfile trajectory, %d samples>" % len(self.samples[0])

    def __repr__(self):
        return self.__str__()

    @staticmethod
    def stationary(x):
        return LeaderProfile(LeaderProfile.STATIONARY, x0=x)

    @staticmethod
    def piecewise(x0, segments):
        return LeaderProfile(LeaderProfile.PIECEWISE, x0=x0,
                             segments=[(float(t), float(v)) for t, v in segments])

    @staticmethod
    def sampled(ts, xs, vs):
        samples = (np.asarray(ts, dtype=float), np.asarray(xs, dtype=float),
                   np.asarray(vs, dtype=float))
        return LeaderProfile(LeaderProfile.TRAJECTORY, x0=float(samples[1][0]) if len(samples[1]) else 0.0,
                             samples=samples)

    def _validate(self):
        if not math.isfinite(self.x0):
            raise exceptions.ConfigError("leader position must be finite", "leader")
        if self.kind == LeaderProfile.STATIONARY:
            return
        if self.kind == LeaderProfile.PIECEWISE:
            if not self.segments:
                raise exceptions.ConfigError("piecewise profile needs segments", "leader")
            if self.segments[0][0] != 0.0:
                raise exceptions.ConfigError("first segment must start at t=0", "leader")
            for (t0, _), (t1, _) in zip(self.segments, self.segments[1:]):
                if not t1 > t0:
                    raise exceptions.ConfigError("segments must be time-ordered", "leader")
            for t, v in self.segments:
                if not (math.isfinite(t) and math.isfinite(v)):
                    raise exceptions.ConfigError("non-finite segment", "leader")
            return
        if self.kind == LeaderProfile.TRAJECTORY:
            ts, xs, vs = self.samples
            if len(ts) < 2 or len(ts) != len(xs) or len(ts) != len(vs):
                raise exceptions.ConfigError("sampled trajectory needs matching columns of >= 2 samples", "leader")
            if not np.all(np.isfinite(ts)) or not np.all(np.isfinite(xs)) or not np.all(np.isfinite(vs)):
                raise exceptions.ConfigError("non-finite sample", "leader")
            if not np.all(np.diff(ts) > 0):
                raise exceptions.ConfigError("sample times must be strictly increasing", "leader")
            if ts[0] > 0:
                raise exceptions.ConfigError("samples must cover t=0", "leader")
            return
        raise exceptions.ConfigError("unknown leader kind '%s'" % self.kind, "leader")

    def placed_at(self, x0):
        if self.kind == LeaderProfile.TRAJECTORY:
            ts, xs, vs = self.samples
            return LeaderProfile.sampled(ts, xs - self.position_at(0.0) + x0, vs)
        return LeaderProfile(self.kind, x0=x0, segments=self.segments)

    def speed_at(self, t):
        if self.kind == LeaderProfile.STATIONARY:
            return 0.0
        if self.kind == LeaderProfile.PIECEWISE:
            v = self.segments[0][1]
            for t_start, v_seg in self.segments:
                if t_start > t:
                    break
                v = v_seg
            return v
        ts, _, vs = self.samples
        if t >= ts[-1]:
            return float(vs[-1])
        return float(np.interp(t, ts, vs))

    def position_at(self, t):
        # only defined directly for sampled trajectories
        ts, xs, vs = self.samples
        if t >= ts[-1]:
            return float(xs[-1] + vs[-1] * (t - ts[-1]))
        return float(np.interp(t, ts, xs))

    def initial_state(self):
        if self.kind == LeaderProfile.TRAJECTORY:
            return VehicleState(self.position_at(0.0), self.speed_at(0.0))
        return VehicleState(self.x0, self.speed_at(0.0))

    def advance(self, s, t_next, eps):
        if self.kind == LeaderProfile.STATIONARY:
            return s
        if self.kind == LeaderProfile.PIECEWISE:
            return step_from_speed(s, self.speed_at(t_next), eps)
        v = self.speed_at(t_next)
        return VehicleState(self.position_at(t_next), v, (v - s.v) / eps)

    def as_dict(self):
        if self.kind == LeaderProfile.STATIONARY:
            return {"kind": self.kind, "x": self.x0}
        if self.kind == LeaderProfile.PIECEWISE:
            return {"kind": self.kind, "x": self.x0,
                    "segments": [{"t": t, "v": v} for t, v in self.segments]}
        ts, xs, vs = self.samples
        return {"kind": self.kind, "samples": len(ts), "t_range": [float(ts[0]), float(ts[-1])]}


@dataclass
class Scenario:
    model: ModelId
    params: object
    eps: StepSize
    t_end: float
    follower0: VehicleState
    leader: LeaderProfile
    clamp_policy: str = "none"

    def validate(self):
        if not isinstance(self.model, ModelId):
            raise exceptions.ConfigError("unknown model %r" % (self.model, ), "model")
        if not isinstance(self.eps, StepSize):
            self.eps = StepSize(self.eps)
        if not (math.isfinite(self.t_end) and self.t_end > 0):
            raise exceptions.ConfigError("must be positive", "t_end")
        if not self.follower0.x < self.leader.initial_state().x:
            raise exceptions.ConfigError("follower must start behind the leader", "follower")
        if self.clamp_policy not in CLAMP_POLICIES:
            raise exceptions.ConfigError("unknown clamp policy '%s'" % self.clamp_policy, "clamp_policy")

    def as_dict(self):
        return {
            "model": self.model.key,
            "params": self.params.as_dict(),
            "eps": self.eps.eps,
            "t_end": self.t_end,
            "follower0": {"x": self.follower0.x, "v": self.follower0.v},
            "leader": self.leader.as_dict(),
            "clamp_policy": self.clamp_policy,
        }


def num_rows(t_end, eps):
    return int(math.ceil(t_end / eps - 1e-9)) + 1


@dataclass(frozen=True)
class TrajectoryStep:
    pair: PairState
    phase: PhaseLabel
    violations: tuple
    a_cmd: float
    v_next: float


class Trajectory(object):
    COLUMNS = ("t", "x_f", "v_f", "a_f", "x_l", "v_l", "z", "a_cmd", "v_next")

    def __init__(self, scenario, rows, vehicle=0):
        self.scenario = scenario
        self.vehicle = vehicle
        self.eps = scenario.eps.eps
        for name in Trajectory.COLUMNS:
            setattr(self, name, np.zeros(rows))
        self.phase = np.zeros(rows, dtype=np.int8)
        self.violations = np.zeros(rows, dtype=np.int16)
        self.size = 0
        self.error = None
        self.meta = {"clamp_policy": scenario.clamp_policy}

    def __str__(self):
        return "<Trajectory %s, %d rows%s>" % (
            self.scenario.model, self.size, ", truncated" if self.error else "")

    def __repr__(self):
        return self.__str__()

    def __len__(self):
        return self.size

    def __iter__(self):
        for i in range(self.size):
            yield self.step(i)

    @property
    def steps(self):
        return list(self)

    @property
    def truncated(self):
        return self.error is not None

    def record(self, pair, out, mask):
        i = self.size
        self.t[i] = pair.t
        self.x_f[i] = pair.follower.x
        self.v_f[i] = pair.follower.v
        self.a_f[i] = pair.follower.a
        self.x_l[i] = pair.leader.x
        self.v_l[i] = pair.leader.v
        self.z[i] = pair.spacing
        if out is None:
            self.a_cmd[i] = math.nan
            self.v_next[i] = math.nan
            self.phase[i] = PhaseLabel.Unclassified.code
        else:
            self.a_cmd[i] = out.a
            self.v_next[i] = out.v_next
            self.phase[i] = out.phase.code
        self.violations[i] = mask
        self.size += 1

    def finish(self):
        # drop unused preallocated rows
        for name in Trajectory.COLUMNS + ("phase", "violations"):
            setattr(self, name, getattr(self, name)[:self.size])

    def step(self, i):
        params = self.scenario.params
        pair = PairState.make(
            float(self.t[i]),
            VehicleState(float(self.x_f[i]), float(self.v_f[i]), float(self.a_f[i])),
            VehicleState(float(self.x_l[i]), float(self.v_l[i])),
            params)
        mask = int(self.violations[i])
        violations = tuple(p for p in PrincipleId if mask & p.bit)
        return TrajectoryStep(pair, PhaseLabel.from_code(int(self.phase[i])), violations,
                              float(self.a_cmd[i]), float(self.v_next[i]))

    def rows(self, digits=None):
        if digits is None:
            digits = Settings().get_integer("cfphase.csv.significant_digits")
        for i in range(self.size):
            yield [
                format_float(self.t[i], digits),
                format_float(self.x_f[i], digits),
                format_float(self.v_f[i], digits),
                format_float(self.a_f[i], digits),
                format_float(self.x_l[i], digits),
                format_float(self.v_l[i], digits),
                format_float(self.z[i], digits),
                PhaseLabel.from_code(int(self.phase[i])).name,
                ";".join(codes_of(int(self.violations[i]))),
            ]

    def write_csv(self, path):
        write_csv(path, TRAJECTORY_HEADER, self.rows())

    def metadata(self):
        return {
            "scenario": self.scenario.as_dict(),
            "vehicle": self.vehicle,
            "rows": self.size,
            "clamp_policy": self.scenario.clamp_policy,
            "error": self.error,
            "meta": self.meta,
        }

    def write_metadata(self, path):
        write_json(path, self.metadata())


class CFExecutor(object):
    def __init__(self, scenario, followers=None):
        scenario.validate()
        self.scenario = scenario
        self.params = scenario.params
        self.eps = scenario.eps.eps
        self.model = get_model(scenario.model)
        self.clamp = scenario.clamp_policy == "stop-at-zero-speed"
        self.tol = Tolerances.from_settings()

        self.vehicles = list(followers) if followers is not None else [scenario.follower0]
        self.leader = scenario.leader.initial_state()
        self.rows = num_rows(scenario.t_end, self.eps)
        self.trajectories = [
            Trajectory(scenario, self.rows, vehicle=i) for i in range(len(self.vehicles))]
        self.index = 0
        self.done = False
        self.last_pairs = None
        self.last_outputs = None

    def __str__(self):
        return "<CFExecutor %s, %d vehicles, row %d/%d>" % (
            self.scenario.model, len(self.vehicles), self.index, self.rows)

    def __repr__(self):
        return self.__str__()

    @property
    def trajectory(self):
        return self.trajectories[0]

    def _truncate(self, vehicle, t, err):
        record = {
            "t": t,
            "vehicle": vehicle,
            "kind": err.__class__.__name__,
            "message": err.message,
        }
        for i, traj in enumerate(self.trajectories):
            if i == vehicle:
                traj.error = record
            else:
                traj.meta["halted_by"] = record
        log_warn("trajectory truncated at t=%g: %s", t, err.message)

    def execute_one(self):
        if self.done:
            return False

        t = self.index * self.eps
        front = self.leader
        pairs = []
        for s in self.vehicles:
            pairs.append(PairState.make(t, s, front, self.params))
            front = s

        outputs = []
        failed = None
        for i, pair in enumerate(pairs):
            try:
                out = self.model(pair, self.params, self.eps)
            except exceptions.ModelDomainError as e:
                failed = (i, e)
                out = None
            outputs.append(out)
            self.trajectories[i].record(
                pair, out, violation_mask(pair, out, self.params, self.tol))

        self.last_pairs = pairs
        self.last_outputs = outputs
        self.index += 1

        if failed is not None:
            self._truncate(failed[0], t, failed[1])
            self.done = True
            return False
        if self.index >= self.rows:
            self.done = True
            return False

        # spacings were read before any update; now everyone steps
        t_next = self.index * self.eps
        for i, out in enumerate(outputs):
            v_next = out.v_next
            if self.clamp and v_next < 0:
                v_next = 0.0
            self.vehicles[i] = step_from_speed(self.vehicles[i], v_next, self.eps)
        self.leader = self.scenario.leader.advance(self.leader, t_next, self.eps)
        return True

    def run(self, step_callback=None):
        log_info("running %s: eps=%g, %d rows, %d vehicles",
                 self.scenario.model, self.eps, self.rows, len(self.vehicles))
        while self.execute_one():
            if step_callback is not None:
                if not step_callback(self):
                    for traj in self.trajectories:
                        traj.meta["stopped_early"] = self.index * self.eps
                    break
        for traj in self.trajectories:
            traj.finish()
        return self.trajectories


def run(sc, step_callback=None):
    return CFExecutor(sc).run(step_callback)[0]


def run_platoon(model, params, eps, n, initial, lead, t_end, clamp_policy="none"):
    if n < 1:
        raise exceptions.ConfigError("platoon needs at least one vehicle", "n")
    if len(initial) != n:
        raise exceptions.ConfigError("expected %d initial states, got %d" % (n, len(initial)), "initial")
    front = lead.initial_state().x
    for s in initial:
        if not s.x < front:
            raise exceptions.ConfigError("initial positions must be strictly decreasing from the leader", "initial")
        front = s.x

    sc = Scenario(model, params, eps if isinstance(eps, StepSize) else StepSize(eps),
                  t_end, initial[0], lead, clamp_policy)
    return CFExecutor(sc, followers=initial).run()


def settle_time(traj, v_tol, z_tol):
    if not (v_tol > 0 and z_tol > 0):
        raise exceptions.ConfigError("tolerances must be positive", "settle_time")
    n = len(traj)
    if n == 0:
        return None
    ok = (np.abs(traj.v_f[:n]) <= v_tol) & \
        (np.abs(traj.z[:n] - traj.scenario.params.zeta) <= z_tol)
    if not ok[-1]:
        return None
    bad = np.flatnonzero(~ok)
    if len(bad) == 0:
        return float(traj.t[0])
    return float(traj.t[bad[-1] + 1])
