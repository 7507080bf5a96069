import math
from dataclasses import dataclass

import numpy as np

from .labels import PhaseLabel
from ..cf_state import PairState, as_eps
from ..models.car_following_models import model_next
from ..utility.csv_util import format_float, write_csv
from ..utility.exceptions import ModelDomainError

VECTOR_FIELD_HEADER = ["v", "z", "dvdt", "dzdt", "phase"]


@dataclass(frozen=True)
class FieldPoint:
    v: float
    z: float
    dvdt: float
    dzdt: float
    phase: PhaseLabel
    ill_defined: bool = False


def vector_field(model_id, params, v_range, z_range, counts, eps):
    # stationary leader: dz/dt = -v whatever the model does
    eps = as_eps(eps)
    res = []
    for z in np.linspace(z_range[0], z_range[1], counts[1]):
        for v in np.linspace(v_range[0], v_range[1], counts[0]):
            v = float(v)
            z = float(z)
            p = PairState.at_rest(v, z, params)
            try:
                out = model_next(model_id, p, params, eps)
            except ModelDomainError:
                res.append(FieldPoint(v, z, math.nan, -v, PhaseLabel.Unclassified, True))
                continue
            res.append(FieldPoint(v, z, out.a, -v, out.phase))
    return res


def write_vector_field(path, points):
    rows = []
    for pt in points:
        if pt.ill_defined:
            phase = "IllDefined"
        elif pt.phase == PhaseLabel.Unclassified:
            phase = ""
        else:
            phase = pt.phase.name
        rows.append([format_float(pt.v), format_float(pt.z),
                     format_float(pt.dvdt), format_float(pt.dzdt), phase])
    write_csv(path, VECTOR_FIELD_HEADER, rows)
