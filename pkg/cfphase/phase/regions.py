from dataclasses import dataclass

import numpy as np

from .labels import PhaseLabel, ILL_DEFINED_CODE, phase_legend
from ..cf_state import PairState, as_eps
from ..models.model_types import ModelId
from ..models.car_following_models import model_next
from ..utility.csv_util import format_float, write_csv
from ..utility.exceptions import ModelDomainError
from ..utility.json_util import write_json

# labels each model can produce
MODEL_PHASES = {
    ModelId.Newell: (
        PhaseLabel.EquilibriumCruising,
        PhaseLabel.EquilibriumAcceleration,
        PhaseLabel.EquilibriumDeceleration),
    ModelId.BANewell: (
        PhaseLabel.BoundedAcceleration,
        PhaseLabel.EquilibriumCruising,
        PhaseLabel.EquilibriumAcceleration,
        PhaseLabel.EquilibriumDeceleration),
    ModelId.BDANewell: (
        PhaseLabel.BoundedAcceleration,
        PhaseLabel.EquilibriumCruising,
        PhaseLabel.EquilibriumAcceleration,
        PhaseLabel.EquilibriumDeceleration,
        PhaseLabel.BoundedDeceleration),
    ModelId.IDM: (PhaseLabel.Unclassified, ),
    ModelId.GippsFull: (PhaseLabel.GippsAccelBranch, PhaseLabel.GippsSafeBranch),
    ModelId.GippsSimplified: (PhaseLabel.GippsAccelBranch, PhaseLabel.GippsSafeBranch),
}


def classify(model_id, p, params, eps):
    if model_id == ModelId.IDM:
        return PhaseLabel.Unclassified
    return model_next(model_id, p, params, eps).phase


def critical_spacing(params):
    return params.mu * params.tau + params.zeta


@dataclass
class PhaseMap:
    model: ModelId
    eps: float
    v_values: np.ndarray
    z_values: np.ndarray
    codes: np.ndarray  # shape (len(z_values), len(v_values))

    def labels_present(self):
        return sorted(int(c) for c in np.unique(self.codes))

    def write_csv(self, path):
        header = ["z\\v"] + [format_float(v) for v in self.v_values]
        rows = []
        for j, z in enumerate(self.z_values):
            rows.append([format_float(z)] + [str(int(c)) for c in self.codes[j]])
        write_csv(path, header, rows)

    def legend(self):
        return {
            "model": self.model.key,
            "eps": self.eps,
            "rows": "spacing z (m), first column",
            "columns": "speed v (m/s), header row",
            "codes": phase_legend(),
        }

    def write_legend(self, path):
        write_json(path, self.legend())


def phase_map(model_id, params, v_range, z_range, counts, eps):
    eps = as_eps(eps)
    v_values = np.linspace(v_range[0], v_range[1], counts[0])
    z_values = np.linspace(z_range[0], z_range[1], counts[1])
    codes = np.zeros((len(z_values), len(v_values)), dtype=np.int8)
    for j, z in enumerate(z_values):
        for i, v in enumerate(v_values):
            p = PairState.at_rest(float(v), float(z), params)
            try:
                codes[j, i] = classify(model_id, p, params, eps).code
            except ModelDomainError:
                codes[j, i] = ILL_DEFINED_CODE
    return PhaseMap(model_id, eps, v_values, z_values, codes)
