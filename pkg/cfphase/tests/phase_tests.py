import json

import numpy as np
import pytest

from ..cf_state import ModelParams, PairState
from ..models.car_following_models import model_next
from ..models.model_types import ModelId
from ..phase.fundamental_diagram import (
    breakpoint_density,
    fd_from_simulation,
    fundamental_diagram,
    steady_speed,
    wave_speed,
    write_fd
)
from ..phase.labels import ILL_DEFINED_CODE, PhaseLabel, RegionLabel, region_of
from ..phase.regions import MODEL_PHASES, classify, critical_spacing, phase_map
from ..phase.vector_field import vector_field, write_vector_field
from ..utility.csv_util import read_csv
from ..utility.exceptions import ConfigError, UnsupportedModel

params = ModelParams()


def test_1():
    assert critical_spacing(params) == pytest.approx(55.0)
    assert critical_spacing(ModelParams(tau=0.0, mu=0.0, check=False)) == 7.0


def test_2():
    assert region_of(-1.0, 10.0, params) == RegionLabel.InfeasibleNegativeSpeed
    assert region_of(-1.0, 4.0, params) == RegionLabel.InfeasibleNegativeSpeed
    assert region_of(5.0, 4.0, params) == RegionLabel.BlackMinimumViolation
    assert region_of(5.0, 6.0, params) == RegionLabel.GreyComfortViolation
    assert region_of(5.0, 7.0, params) == RegionLabel.Feasible


def test_bda_phase_map_has_five_phases():
    pm = phase_map(ModelId.BDANewell, params, (0.0, 30.0), (0.0, 120.0), (200, 200), 1.0)
    assert pm.codes.shape == (200, 200)
    assert pm.labels_present() == [0, 1, 2, 3, 4]


def test_ba_phase_map_has_four_phases():
    pm = phase_map(ModelId.BANewell, params, (0.0, 30.0), (0.0, 120.0), (200, 200), 1.0)
    assert pm.labels_present() == [0, 1, 2, 3]


@pytest.mark.parametrize("model", [ModelId.BANewell, ModelId.BDANewell])
def test_labels_match_acceleration(model):
    eps = 1.0
    pm = phase_map(model, params, (0.0, 30.0), (0.0, 120.0), (200, 200), eps)
    lower = -params.beta if model == ModelId.BDANewell else -np.inf
    for j, z in enumerate(pm.z_values):
        for i, v in enumerate(pm.v_values):
            v = float(v)
            p = PairState.at_rest(v, float(z), params)
            out = model_next(model, p, params, eps)
            assert out.phase.code == pm.codes[j, i]
            assert out.phase in MODEL_PHASES[model]
            bound = params.alpha * (1 - v / params.mu)
            if out.phase == PhaseLabel.BoundedAcceleration:
                assert out.a == bound
            elif out.phase == PhaseLabel.BoundedDeceleration:
                assert out.a == -params.beta
            elif out.phase == PhaseLabel.EquilibriumCruising:
                assert out.a == 0.0
            elif out.phase == PhaseLabel.EquilibriumAcceleration:
                assert 0.0 < out.a < bound
            else:
                assert lower < out.a < 0.0


def test_gipps_phase_map_marks_ill_defined():
    pm = phase_map(ModelId.GippsSimplified, params, (0.0, 30.0), (0.0, 120.0), (20, 40), 0.001)
    present = pm.labels_present()
    assert ILL_DEFINED_CODE in present
    assert PhaseLabel.GippsAccelBranch.code in present
    assert PhaseLabel.GippsSafeBranch.code in present


def test_classify_idm():
    p = PairState.at_rest(10.0, 50.0, params)
    assert classify(ModelId.IDM, p, params, 0.001) == PhaseLabel.Unclassified


def test_phase_map_files(tmp_path):
    pm = phase_map(ModelId.Newell, params, (0.0, 30.0), (7.0, 60.0), (4, 3), 1.0)
    path = tmp_path / "map.csv"
    pm.write_csv(str(path))
    pm.write_legend(str(path) + ".legend.json")
    header, rows = read_csv(str(path))
    assert header == ["z\\v", "0", "10", "20", "30"]
    assert len(rows) == 3
    legend = json.loads((tmp_path / "map.csv.legend.json").read_text())
    assert legend["codes"]["-1"] == "IllDefined"
    assert legend["codes"]["1"] == "EquilibriumCruising"


def test_vector_field_idm(tmp_path):
    points = vector_field(ModelId.IDM, params, (0.0, 30.0), (0.0, 100.0), (5, 5), 0.001)
    assert len(points) == 25
    assert all(pt.dzdt == -pt.v for pt in points)
    assert all(pt.ill_defined for pt in points if pt.z <= params.zeta_min)

    path = tmp_path / "field.csv"
    write_vector_field(str(path), points)
    header, rows = read_csv(str(path))
    assert header == ["v", "z", "dvdt", "dzdt", "phase"]
    assert {r[4] for r in rows} == {"", "IllDefined"}


def test_vector_field_newell():
    points = vector_field(ModelId.BANewell, params, (0.0, 30.0), (7.0, 100.0), (5, 5), 0.001)
    assert not any(pt.ill_defined for pt in points)
    assert {pt.phase for pt in points} <= set(MODEL_PHASES[ModelId.BANewell])


def test_wave_speeds():
    assert wave_speed(ModelId.Newell, params) == pytest.approx(4.375, abs=1e-6)
    assert wave_speed(ModelId.BDANewell, params) == pytest.approx(1 / (params.tau * params.kappa), abs=1e-6)
    assert wave_speed(ModelId.GippsSimplified, params) == pytest.approx(7.0, abs=1e-6)
    with pytest.raises(UnsupportedModel):
        wave_speed(ModelId.IDM, params)


def test_fundamental_diagram_newell():
    k_b = breakpoint_density(ModelId.Newell, params)
    assert k_b == pytest.approx(1 / 55.0)
    points = fundamental_diagram(ModelId.Newell, params, [k_b / 2, k_b, params.kappa])
    assert points[0].v == params.mu
    assert points[1].v == pytest.approx(params.mu)
    assert points[2].v == 0.0
    assert points[2].q == 0.0
    # congested branch slope
    k1, k2 = 0.05, 0.1
    q1, q2 = [p.q for p in fundamental_diagram(ModelId.Newell, params, [k1, k2])]
    assert (q2 - q1) / (k2 - k1) == pytest.approx(-4.375)


def test_fundamental_diagram_gipps_shares_steady_state():
    ks = np.linspace(0.01, params.kappa, 10)
    full = fundamental_diagram(ModelId.GippsFull, params, ks)
    simplified = fundamental_diagram(ModelId.GippsSimplified, params, ks)
    assert [p.v for p in full] == [p.v for p in simplified]


@pytest.mark.parametrize("k", [0.0, -0.1, 0.2])
def test_fundamental_diagram_density_range(k):
    with pytest.raises(ConfigError):
        steady_speed(ModelId.Newell, params, k)


def test_fundamental_diagram_idm():
    with pytest.raises(UnsupportedModel):
        fundamental_diagram(ModelId.IDM, params, [0.05])


@pytest.mark.parametrize("model", [
    ModelId.Newell, ModelId.BANewell, ModelId.BDANewell, ModelId.GippsSimplified])
def test_simulated_fundamental_diagram(model):
    for i in range(1, 21):
        k = params.kappa * i / 20
        measured = fd_from_simulation(model, params, k)
        assert measured.v == pytest.approx(steady_speed(model, params, k), abs=0.01)


def test_write_fd(tmp_path):
    path = tmp_path / "fd.csv"
    write_fd(str(path), fundamental_diagram(ModelId.Newell, params, [0.01, 0.1]))
    header, rows = read_csv(str(path))
    assert header == ["k", "v", "q"]
    assert rows[0] == ["0.01", "30", "0.3"]
