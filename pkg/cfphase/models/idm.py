import math

from .model_types import ModelOutput
from ..phase.labels import PhaseLabel
from ..utility.exceptions import SingularInput


def idm_accel(p, params):
    z = p.spacing
    if not z > params.zeta_min:
        raise SingularInput(z, params.zeta_min)

    v = p.follower.v
    v_l = p.leader.v
    s = 2 * math.sqrt(params.alpha * params.beta)
    ratio = (s * (params.zeta - params.zeta_min + params.tau * v) + v * (v - v_l)) / \
        (s * (z - params.zeta_min))
    # |v/mu| keeps non-integer exponents real while the follower reverses
    return params.alpha * (1 - abs(v / params.mu) ** params.delta - ratio * ratio)


def idm_next(p, params, eps):
    a = idm_accel(p, params)
    return ModelOutput(p.follower.v + eps * a, a, PhaseLabel.Unclassified)
