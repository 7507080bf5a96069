from enum import Enum


class PhaseLabel(Enum):
    BoundedAcceleration = 0
    EquilibriumCruising = 1
    EquilibriumAcceleration = 2
    EquilibriumDeceleration = 3
    BoundedDeceleration = 4
    GippsAccelBranch = 5
    GippsSafeBranch = 6
    Unclassified = 7

    @property
    def code(self):
        return self.value

    @staticmethod
    def from_code(code):
        return _by_code[code]


_by_code = {label.value: label for label in PhaseLabel}

ILL_DEFINED_CODE = -1


class RegionLabel(Enum):
    Feasible = 0
    GreyComfortViolation = 1
    BlackMinimumViolation = 2
    InfeasibleNegativeSpeed = 3


def region_of(v, z, params):
    if v < 0:
        return RegionLabel.InfeasibleNegativeSpeed
    if z < params.zeta_min:
        return RegionLabel.BlackMinimumViolation
    if z < params.zeta:
        return RegionLabel.GreyComfortViolation
    return RegionLabel.Feasible


def phase_legend():
    legend = {str(label.code): label.name for label in PhaseLabel}
    legend[str(ILL_DEFINED_CODE)] = "IllDefined"
    return legend
