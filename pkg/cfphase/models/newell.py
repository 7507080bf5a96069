from .model_types import ModelOutput
from ..phase.labels import PhaseLabel
from ..settings import Settings
from ..utility.exceptions import PreconditionError
from ..utility.log_util import log_warn

_warned = set()


def check_step_size(params, eps):
    if eps <= params.tau:
        return
    if Settings().get_string("cfphase.models.step_precondition") == "warning":
        if (eps, params.tau) not in _warned:
            _warned.add((eps, params.tau))
            log_warn("step size %g exceeds minimum time gap %g; collision-free guarantee lost",
                     eps, params.tau)
        return
    raise PreconditionError(eps, params.tau)


def equilibrium_speed(p, params):
    return min(params.mu, (p.spacing - params.zeta) / params.tau)


def _equilibrium_phase(v, v_star):
    if v == v_star:
        return PhaseLabel.EquilibriumCruising
    if v_star > v:
        return PhaseLabel.EquilibriumAcceleration
    return PhaseLabel.EquilibriumDeceleration


def newell_next(p, params, eps):
    check_step_size(params, eps)
    v = p.follower.v
    v_star = equilibrium_speed(p, params)
    return ModelOutput(v_star, (v_star - v) / eps, _equilibrium_phase(v, v_star))


def ba_newell_next(p, params, eps):
    check_step_size(params, eps)
    v = p.follower.v
    v_star = equilibrium_speed(p, params)
    bound = params.alpha * (1 - v / params.mu)
    target = (v_star - v) / eps
    a = min(bound, target)

    if v == v_star:
        phase = PhaseLabel.EquilibriumCruising
    elif bound <= target:
        phase = PhaseLabel.BoundedAcceleration
    else:
        phase = _equilibrium_phase(v, v_star)
    return ModelOutput(v + eps * a, a, phase)


def bda_newell_next(p, params, eps):
    check_step_size(params, eps)
    v = p.follower.v
    v_star = equilibrium_speed(p, params)
    bound = params.alpha * (1 - v / params.mu)
    target = (v_star - v) / eps
    a_ba = min(bound, target)
    a = max(-params.beta, a_ba)

    if v == v_star:
        phase = PhaseLabel.EquilibriumCruising
    elif bound <= target and bound >= -params.beta:
        phase = PhaseLabel.BoundedAcceleration
    elif a_ba <= -params.beta:
        phase = PhaseLabel.BoundedDeceleration
    else:
        phase = _equilibrium_phase(v, v_star)
    return ModelOutput(v + eps * a, a, phase)
