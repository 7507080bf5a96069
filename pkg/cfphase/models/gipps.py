import math

from .model_types import ModelOutput
from ..phase.labels import PhaseLabel
from ..utility.exceptions import IllDefinedModel


def _gipps_output(v, acc_speed, safe_speed, eps):
    if acc_speed <= safe_speed:
        return ModelOutput(acc_speed, (acc_speed - v) / eps, PhaseLabel.GippsAccelBranch)
    return ModelOutput(safe_speed, (safe_speed - v) / eps, PhaseLabel.GippsSafeBranch)


def gipps_full_discriminant(p, params):
    b = params.beta
    return b * b * params.tau1 * params.tau1 + 2 * b * (p.spacing - params.zeta) + \
        2 * b * (params.tau1 - params.tau_brake) * p.follower.v + p.leader.v * p.leader.v


def gipps_simplified_discriminant(p, params):
    b = params.beta
    return b * b * params.tau_brake * params.tau_brake + \
        2 * b * (p.spacing - params.zeta) + p.leader.v * p.leader.v


def gipps_full_next(p, params, eps):
    v = p.follower.v
    disc = gipps_full_discriminant(p, params)
    if disc < 0:
        raise IllDefinedModel(disc, p.spacing)
    root = 0.025 + v / params.mu
    if root < 0:
        raise IllDefinedModel(root, p.spacing)

    acc_speed = v + 2.5 * params.alpha_gipps * eps * (1 - v / params.mu) * math.sqrt(root)
    safe_speed = -params.beta * params.tau1 + math.sqrt(disc)
    return _gipps_output(v, acc_speed, safe_speed, eps)


def gipps_simplified_next(p, params, eps):
    v = p.follower.v
    disc = gipps_simplified_discriminant(p, params)
    if disc < 0:
        raise IllDefinedModel(disc, p.spacing)

    acc_speed = v + eps * params.alpha * (1 - v / params.mu)
    safe_speed = -params.beta * params.tau_brake + math.sqrt(disc)
    return _gipps_output(v, acc_speed, safe_speed, eps)
