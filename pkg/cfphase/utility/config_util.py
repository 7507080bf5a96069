import json

from .exceptions import ConfigError
from .units import parse_quantity, parse_number
from ..cf_state import ModelParams, VehicleState, StepSize
from ..cf_executor import LeaderProfile, Scenario
from ..harness.sweep import SweepSpec
from ..models.model_types import ModelId
from ..models.car_following_models import default_step_size
from ..principles import PrincipleId, STEP_PRINCIPLES
from ..settings import Settings

PARAM_DIMENSIONS = {
    "zeta": "length",
    "zeta_min": "length",
    "tau": "time",
    "tau_brake": "time",
    "mu": "speed",
    "alpha": "acceleration",
    "beta": "acceleration",
    "delta": None,
    "tau1": "time",
    "alpha_gipps": "acceleration",
}

SCENARIO_KEYS = ("model", "params", "dt", "t_end", "follower", "leader", "clamp_policy")
SWEEP_KEYS = ("model", "params", "dt", "t_end", "v0", "z0", "leader", "principles",
              "clamp_policy", "compliant_only")


def load_json(path):
    try:
        with open(path, "r") as fin:
            doc = json.load(fin)
    except (OSError, ValueError) as e:
        raise ConfigError("cannot read config: %s" % e, path)
    if not isinstance(doc, dict):
        raise ConfigError("config must hold an object", path)
    return doc


def check_keys(doc, allowed, where):
    if not isinstance(doc, dict):
        raise ConfigError("expected an object", where)
    for key in doc:
        if key not in allowed:
            raise ConfigError("unknown key '%s' (allowed: %s)" % (key, ", ".join(allowed)), where)


def require(doc, key, where):
    if key not in doc:
        raise ConfigError("missing key '%s'" % key, where)
    return doc[key]


def parse_params(doc):
    if doc is None:
        return ModelParams()
    check_keys(doc, tuple(PARAM_DIMENSIONS), "params")
    values = dict()
    for name, value in doc.items():
        dimension = PARAM_DIMENSIONS[name]
        key = "params." + name
        values[name] = parse_number(value, key) if dimension is None else \
            parse_quantity(value, dimension, key)
    return ModelParams(**values)


def parse_vehicle(doc, where):
    check_keys(doc, ("x", "v"), where)
    x = parse_quantity(doc["x"], "length", where + ".x") if "x" in doc else 0.0
    v = parse_quantity(require(doc, "v", where), "speed", where + ".v")
    return VehicleState(x, v)


def parse_leader(doc):
    if not isinstance(doc, dict):
        raise ConfigError("expected an object", "leader")
    kind = require(doc, "kind", "leader")
    if kind == LeaderProfile.STATIONARY:
        check_keys(doc, ("kind", "x"), "leader")
        return LeaderProfile.stationary(
            parse_quantity(require(doc, "x", "leader"), "length", "leader.x"))
    if kind == LeaderProfile.PIECEWISE:
        check_keys(doc, ("kind", "x", "segments"), "leader")
        segments = []
        for i, seg in enumerate(require(doc, "segments", "leader")):
            where = "leader.segments[%d]" % i
            check_keys(seg, ("t", "v"), where)
            segments.append((parse_quantity(require(seg, "t", where), "time", where + ".t"),
                             parse_quantity(require(seg, "v", where), "speed", where + ".v")))
        return LeaderProfile.piecewise(
            parse_quantity(require(doc, "x", "leader"), "length", "leader.x"), segments)
    if kind == LeaderProfile.TRAJECTORY:
        check_keys(doc, ("kind", "samples"), "leader")
        ts, xs, vs = [], [], []
        for i, sample in enumerate(require(doc, "samples", "leader")):
            where = "leader.samples[%d]" % i
            check_keys(sample, ("t", "x", "v"), where)
            ts.append(parse_quantity(require(sample, "t", where), "time", where + ".t"))
            xs.append(parse_quantity(require(sample, "x", where), "length", where + ".x"))
            vs.append(parse_quantity(require(sample, "v", where), "speed", where + ".v"))
        return LeaderProfile.sampled(ts, xs, vs)
    raise ConfigError("unknown leader kind '%s'" % kind, "leader.kind")


def _model(doc, model):
    if model is not None:
        return model if isinstance(model, ModelId) else ModelId.from_key(model)
    return ModelId.from_key(require(doc, "model", "config"))


def _step(doc, model_id, dt):
    if dt is not None:
        return StepSize(dt)
    if "dt" in doc:
        return StepSize(parse_quantity(doc["dt"], "time", "dt"))
    return StepSize(default_step_size(model_id))


def _clamp_policy(doc):
    if "clamp_policy" in doc:
        return doc["clamp_policy"]
    return Settings().get_string("cfphase.sim.clamp_policy")


def scenario_from_config(doc, model=None, dt=None, t_end=None):
    check_keys(doc, SCENARIO_KEYS, "config")
    model_id = _model(doc, model)
    if t_end is None:
        t_end = parse_quantity(require(doc, "t_end", "config"), "time", "t_end")
    sc = Scenario(
        model_id,
        parse_params(doc.get("params")),
        _step(doc, model_id, dt),
        t_end,
        parse_vehicle(require(doc, "follower", "config"), "follower"),
        parse_leader(require(doc, "leader", "config")),
        _clamp_policy(doc))
    sc.validate()
    return sc


def _grid_axis(doc, key, dimension):
    check_keys(doc, ("min", "max", "count"), key)
    lo = parse_quantity(require(doc, "min", key), dimension, key + ".min")
    hi = parse_quantity(require(doc, "max", key), dimension, key + ".max")
    count = require(doc, "count", key)
    if isinstance(count, bool) or not isinstance(count, int):
        raise ConfigError("count must be an integer", key + ".count")
    return (lo, hi), count


def sweep_from_config(doc, model=None):
    check_keys(doc, SWEEP_KEYS, "config")
    model_id = _model(doc, model)
    v0_range, v0_count = _grid_axis(require(doc, "v0", "config"), "v0", "speed")
    z0_range, z0_count = _grid_axis(require(doc, "z0", "config"), "z0", "length")

    principles = frozenset(STEP_PRINCIPLES)
    if "principles" in doc:
        try:
            principles = frozenset(PrincipleId.from_code(c) for c in doc["principles"])
        except (KeyError, ValueError):
            raise ConfigError("unknown principle in %s" % doc["principles"], "principles")

    compliant_only = doc.get("compliant_only", False)
    if not isinstance(compliant_only, bool):
        raise ConfigError("expected a boolean", "compliant_only")

    spec = SweepSpec(
        model_id,
        parse_params(doc.get("params")),
        _step(doc, model_id, None),
        v0_range,
        z0_range,
        v0_count,
        z0_count,
        parse_quantity(require(doc, "t_end", "config"), "time", "t_end"),
        parse_leader(doc["leader"]) if "leader" in doc else LeaderProfile.stationary(0.0),
        principles,
        _clamp_policy(doc),
        compliant_only)
    spec.validate()
    return spec


def load_scenario(path, model=None, dt=None, t_end=None):
    return scenario_from_config(load_json(path), model, dt, t_end)


def load_sweep(path, model=None):
    return sweep_from_config(load_json(path), model)
