from dataclasses import dataclass
from enum import Enum

from ..phase.labels import PhaseLabel
from ..utility.exceptions import ConfigError


class ModelId(Enum):
    Newell = "newell"
    BANewell = "ba-newell"
    BDANewell = "bda-newell"
    IDM = "idm"
    GippsFull = "gipps"
    GippsSimplified = "gipps-simplified"

    @property
    def key(self):
        return self.value

    @staticmethod
    def from_key(key):
        for model in ModelId:
            if model.value == key:
                return model
        raise ConfigError("unknown model '%s' (choose from %s)" % (
            key, ", ".join(m.value for m in ModelId)), "model")

    def __str__(self):
        return self.value


NEWELL_FAMILY = (ModelId.Newell, ModelId.BANewell, ModelId.BDANewell)
GIPPS_FAMILY = (ModelId.GippsFull, ModelId.GippsSimplified)


@dataclass(frozen=True, slots=True)
class ModelOutput:
    v_next: float
    a: float
    phase: PhaseLabel
