import math
from dataclasses import dataclass, field, fields, replace

from .utility.exceptions import ConfigError, InvalidState, DomainError, UndefinedGap


@dataclass(frozen=True)
class ModelParams:
    zeta: float = 7.0           # comfort jam spacing (m)
    zeta_min: float = 5.0       # minimum jam spacing (m)
    tau: float = 1.6            # minimum time gap (s)
    tau_brake: float = 1.0      # braking reaction time (s)
    mu: float = 30.0            # speed limit (m/s)
    alpha: float = 0.73         # comfort acceleration bound (m/s^2)
    beta: float = 1.67          # comfort deceleration bound (m/s^2)
    delta: float = 4.0          # IDM exponent
    tau1: float = 2.0 / 3.0     # Gipps tau_1 (s)
    alpha_gipps: float = 0.73   # original Gipps acceleration (m/s^2)
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        for f in fields(self):
            if f.name == "check":
                continue
            value = getattr(self, f.name)
            if isinstance(value, bool) or not isinstance(value, (int, float)) \
                    or not math.isfinite(value):
                raise ConfigError("must be a finite number, got %r" % (value, ), f.name)
        if self.check:
            self.validate()

    def validate(self):
        if not self.zeta_min > 0:
            raise ConfigError("minimum jam spacing must be positive", "zeta_min")
        if not self.zeta > self.zeta_min:
            raise ConfigError("comfort jam spacing must exceed the minimum jam spacing", "zeta")
        if not self.tau_brake > 0:
            raise ConfigError("braking reaction time must be positive", "tau_brake")
        if not self.tau > self.tau_brake:
            raise ConfigError("minimum time gap must exceed the braking reaction time", "tau")
        for name in ("mu", "alpha", "beta", "delta", "tau1", "alpha_gipps"):
            if not getattr(self, name) > 0:
                raise ConfigError("must be positive", name)

    @property
    def kappa(self):
        return 1.0 / self.zeta

    def with_values(self, **kwargs):
        return replace(self, **kwargs)

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name != "check"}


@dataclass(frozen=True, slots=True)
class VehicleState:
    x: float
    v: float
    a: float = 0.0  # applied over the step that led here

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.v) and math.isfinite(self.a)):
            raise InvalidState("vehicle state", (self.x, self.v, self.a))


@dataclass(frozen=True, slots=True)
class PairState:
    t: float
    follower: VehicleState
    leader: VehicleState
    spacing: float
    clearance: float

    @staticmethod
    def make(t, follower, leader, params):
        spacing = leader.x - follower.x
        return PairState(t, follower, leader, spacing, spacing - params.zeta)

    @staticmethod
    def at_rest(v, z, params, v_leader=0.0, t=0.0):
        # follower at the origin, leader z ahead
        return PairState.make(t, VehicleState(0.0, v), VehicleState(z, v_leader), params)


@dataclass(frozen=True)
class StepSize:
    eps: float

    def __post_init__(self):
        if isinstance(self.eps, bool) or not isinstance(self.eps, (int, float)) \
                or not math.isfinite(self.eps) or self.eps <= 0:
            raise ConfigError("step size must be a positive finite number, got %r" % (self.eps, ), "eps")

    def __float__(self):
        return float(self.eps)


def as_eps(eps):
    if isinstance(eps, StepSize):
        return eps.eps
    return StepSize(eps).eps


def symplectic_step(s, a, eps):
    eps = as_eps(eps)
    if not math.isfinite(a):
        raise InvalidState("acceleration", a)
    v = s.v + eps * a
    x = s.x + eps * v
    return VehicleState(x, v, a)


def step_from_speed(s, v_next, eps):
    eps = as_eps(eps)
    if not math.isfinite(v_next):
        raise InvalidState("speed", v_next)
    return symplectic_step(s, (v_next - s.v) / eps, eps)


def time_gap(p, v_next):
    if v_next < 0:
        raise DomainError("time gap needs a non-negative speed, got %g" % v_next)
    if v_next == 0:
        if p.clearance > 0:
            return math.inf
        raise UndefinedGap(p.clearance)
    return p.clearance / v_next
