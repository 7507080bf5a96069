import cmath
import math
from dataclasses import dataclass

import numpy as np

from ..utility.exceptions import SingularInput

STABLE_SPIRAL = "stable spiral"
STABLE_NODE = "stable node"
OTHER = "other"


@dataclass(frozen=True)
class LinearizationResult:
    jacobian: np.ndarray
    eigenvalues: tuple
    classification: str

    def numeric_eigenvalues(self):
        w = np.linalg.eigvals(self.jacobian)
        return tuple(sorted((complex(x) for x in w), key=lambda c: (c.real, c.imag)))

    def as_dict(self):
        return {
            "jacobian": self.jacobian.tolist(),
            "eigenvalues": [[e.real, e.imag] for e in self.eigenvalues],
            "classification": self.classification,
        }


def _gain(params):
    gap = params.zeta - params.zeta_min
    if gap <= 0:
        raise SingularInput(params.zeta, params.zeta_min)
    return params.alpha / gap


def idm_linearize(params):
    c = _gain(params)
    tau = params.tau
    jacobian = np.array([[-2 * tau * c, 2 * c], [-1.0, 0.0]])

    disc = tau * tau - 2 * (params.zeta - params.zeta_min) / params.alpha
    root = cmath.sqrt(disc)
    eigenvalues = tuple(sorted(
        (c * (-tau - root), c * (-tau + root)), key=lambda e: (e.real, e.imag)))

    # trace/determinant reading of the fixed point
    trace = jacobian[0, 0] + jacobian[1, 1]
    det = jacobian[0, 0] * jacobian[1, 1] - jacobian[0, 1] * jacobian[1, 0]
    if det > 0 and trace < 0:
        classification = STABLE_SPIRAL if disc < 0 else STABLE_NODE
    else:
        classification = OTHER
    return LinearizationResult(jacobian, eigenvalues, classification)


def idm_linear_rhs(params, v, ztilde):
    c = _gain(params)
    return -2 * params.tau * c * v + 2 * c * ztilde, -v


def idm_slvp_rhs(params, v, ztilde):
    s = 2 * math.sqrt(params.alpha * params.beta)
    gap = params.zeta - params.zeta_min
    if gap + ztilde <= 0:
        raise SingularInput(params.zeta + ztilde, params.zeta_min)
    ratio = (s * (gap + params.tau * v) + v * v) / (s * (gap + ztilde))
    dv = params.alpha * (1 - abs(v / params.mu) ** params.delta - ratio * ratio)
    return dv, -v


def linear_remainder(params, v, ztilde):
    full = idm_slvp_rhs(params, v, ztilde)
    lin = idm_linear_rhs(params, v, ztilde)
    return math.hypot(full[0] - lin[0], full[1] - lin[1])
