import json

import numpy as np
import pytest

from ..cf_executor import (
    CFExecutor,
    LeaderProfile,
    Scenario,
    num_rows,
    run,
    run_platoon,
    settle_time
)
from ..cf_state import ModelParams, VehicleState, StepSize
from ..models.model_types import ModelId
from ..phase.labels import PhaseLabel
from ..principles import PrincipleId
from ..utility.exceptions import ConfigError

params = ModelParams()

JAM_CSV = (
    "t,x_f,v_f,a_f,x_l,v_l,z,phase,violations\n"
    "0,0,0,0,7,0,7,EquilibriumCruising,\n"
    "0.5,0,0,0,7,0,7,EquilibriumCruising,\n"
    "1,0,0,0,7,0,7,EquilibriumCruising,\n"
)


def _slvp(model, eps, t_end, v0, z0, clamp_policy="none"):
    return Scenario(model, params, StepSize(eps), t_end, VehicleState(0.0, v0),
                    LeaderProfile.stationary(z0), clamp_policy)


def test_1():
    assert num_rows(1.0, 0.5) == 3
    assert num_rows(60.0, 0.001) == 60001
    assert num_rows(0.1, 0.03) == 5
    assert num_rows(125.0, 0.001) == 125001


def test_2(tmp_path):  # golden jam trajectory
    traj = run(_slvp(ModelId.Newell, 0.5, 1.0, 0.0, 7.0))
    path = tmp_path / "jam.csv"
    traj.write_csv(str(path))
    assert path.read_text() == JAM_CSV


def test_3():  # following a leader at the equilibrium spacing
    sc = Scenario(ModelId.BDANewell, params, StepSize(0.1), 2.0, VehicleState(0.0, 10.0),
                  LeaderProfile.piecewise(23.0, [(0.0, 10.0)]))
    traj = run(sc)
    assert len(traj) == 21
    assert not traj.truncated
    assert all(s.phase == PhaseLabel.EquilibriumCruising for s in traj)
    assert traj.t[-1] == pytest.approx(2.0)


def test_spacing_follows_positions():
    leader = LeaderProfile.piecewise(40.0, [(0.0, 10.0), (3.0, 0.0)])
    sc = Scenario(ModelId.BANewell, params, StepSize(0.01), 8.0, VehicleState(0.0, 20.0), leader)
    traj = run(sc)
    n = len(traj)
    assert np.array_equal(traj.z, traj.x_l - traj.x_f)
    dz = traj.z[1:n] - traj.z[:n - 1]
    expected = 0.01 * (traj.v_l[1:n] - traj.v_f[1:n])
    assert np.max(np.abs(dz - expected)) <= 1e-9


def test_applied_acceleration_column():
    traj = run(_slvp(ModelId.BANewell, 0.001, 0.01, 0.0, 100.0))
    assert traj.a_f[0] == 0.0
    assert traj.a_f[1] == pytest.approx(traj.a_cmd[0])
    assert traj.v_f[1] == pytest.approx(traj.v_next[0])


def test_truncation():
    traj = run(_slvp(ModelId.IDM, 0.001, 10.0, 0.0, 4.0))
    assert traj.truncated
    assert len(traj) == 1
    assert traj.error["kind"] == "SingularInput"
    assert traj.error["t"] == 0.0
    assert np.isnan(traj.a_cmd[0])
    assert traj.phase[0] == PhaseLabel.Unclassified.code
    # the state at the failing row is still audited
    assert traj.steps[0].violations == (PrincipleId.ComfortJamSpacing, PrincipleId.MinimumJamSpacing)


def test_clamp_policy():
    free = run(_slvp(ModelId.IDM, 0.001, 0.5, 0.0, 5.5))
    assert np.min(free.v_f) < 0

    clamped = run(_slvp(ModelId.IDM, 0.001, 0.5, 0.0, 5.5, "stop-at-zero-speed"))
    assert np.min(clamped.v_f) == 0.0
    assert clamped.metadata()["clamp_policy"] == "stop-at-zero-speed"


def test_metadata(tmp_path):
    traj = run(_slvp(ModelId.IDM, 0.001, 1.0, 0.0, 4.0))
    path = tmp_path / "t.csv.meta.json"
    traj.write_metadata(str(path))
    doc = json.loads(path.read_text())
    assert doc["rows"] == 1
    assert doc["error"]["kind"] == "SingularInput"
    assert doc["scenario"]["model"] == "idm"
    assert doc["scenario"]["leader"] == {"kind": "stationary", "x": 4.0}


def test_platoon():
    initial = [VehicleState(-23.0, 10.0), VehicleState(-46.0, 10.0), VehicleState(-69.0, 10.0)]
    lead = LeaderProfile.piecewise(0.0, [(0.0, 10.0)])
    trajs = run_platoon(ModelId.Newell, params, 0.1, 3, initial, lead, 5.0)
    assert len(trajs) == 3
    for traj in trajs:
        assert len(traj) == 51
        assert np.all(traj.v_f == 10.0)
        assert np.all(traj.z == 23.0)
    # each follower sees the vehicle ahead of it
    assert np.array_equal(trajs[1].x_l, trajs[0].x_f)


def test_platoon_halts_on_first_error():
    initial = [VehicleState(-50.0, 0.0), VehicleState(-54.0, 0.0)]
    trajs = run_platoon(ModelId.IDM, params, 0.001, 2, initial, LeaderProfile.stationary(0.0), 5.0)
    assert len(trajs[0]) == len(trajs[1]) == 1
    assert trajs[1].truncated
    assert not trajs[0].truncated
    assert trajs[0].meta["halted_by"]["vehicle"] == 1


def test_platoon_rejects_unordered():
    initial = [VehicleState(-50.0, 0.0), VehicleState(-40.0, 0.0)]
    with pytest.raises(ConfigError):
        run_platoon(ModelId.Newell, params, 0.1, 2, initial, LeaderProfile.stationary(0.0), 5.0)


def test_step_callback_stops():
    executor = CFExecutor(_slvp(ModelId.Newell, 0.1, 10.0, 0.0, 7.0))
    trajs = executor.run(lambda ex: False)
    assert len(trajs[0]) == 1
    assert trajs[0].meta["stopped_early"] == pytest.approx(0.1)


def test_settle_time():
    traj = run(_slvp(ModelId.Newell, 0.5, 1.0, 0.0, 7.0))
    assert settle_time(traj, 0.01, 0.05) == 0.0
    traj = run(_slvp(ModelId.BANewell, 0.001, 30.0, 30.0, 55.0))
    t = settle_time(traj, 0.01, 0.05)
    assert 5.0 < t < 30.0
    with pytest.raises(ConfigError):
        settle_time(traj, 0.0, 0.05)


def test_leader_profiles():
    lead = LeaderProfile.piecewise(10.0, [(0.0, 10.0), (5.0, 0.0)])
    assert lead.speed_at(4.9) == 10.0
    assert lead.speed_at(5.0) == 0.0
    assert lead.placed_at(3.0).initial_state().x == 3.0

    sampled = LeaderProfile.sampled([0.0, 1.0, 2.0], [5.0, 6.0, 8.0], [1.0, 1.5, 2.5])
    assert sampled.position_at(0.5) == pytest.approx(5.5)
    assert sampled.speed_at(1.5) == pytest.approx(2.0)
    assert sampled.position_at(3.0) == pytest.approx(10.5)
    assert sampled.placed_at(0.0).position_at(2.0) == pytest.approx(3.0)


@pytest.mark.parametrize("build", [
    lambda: LeaderProfile.piecewise(0.0, [(1.0, 5.0)]),
    lambda: LeaderProfile.piecewise(0.0, [(0.0, 5.0), (0.0, 3.0)]),
    lambda: LeaderProfile.piecewise(0.0, []),
    lambda: LeaderProfile.sampled([0.0, 2.0, 1.0], [0.0, 1.0, 2.0], [0.0, 0.0, 0.0]),
    lambda: LeaderProfile.sampled([1.0, 2.0], [0.0, 1.0], [0.0, 0.0]),
    lambda: LeaderProfile("teleport"),
])
def test_leader_rejected(build):
    with pytest.raises(ConfigError):
        build()


def test_scenario_rejected():
    with pytest.raises(ConfigError):
        run(_slvp(ModelId.Newell, 0.1, 10.0, 0.0, -1.0))
    with pytest.raises(ConfigError):
        run(_slvp(ModelId.Newell, 0.1, 0.0, 0.0, 10.0))
    with pytest.raises(ConfigError):
        run(_slvp(ModelId.Newell, 0.1, 1.0, 0.0, 10.0, "brake-hard"))


def test_terminal_spacing_converges_first_order():
    # bounded acceleration from rest throughout; z_end(eps) - z_end(eps/2) is about 8 eps
    c = 10.0
    z_end = []
    for eps in (0.01, 0.005, 0.0025):
        traj = run(_slvp(ModelId.BANewell, eps, 20.0, 0.0, 200.0))
        assert set(int(p) for p in traj.phase) == {PhaseLabel.BoundedAcceleration.code}
        assert traj.t[-1] == pytest.approx(20.0)
        z_end.append(float(traj.z[-1]))
    d1 = abs(z_end[0] - z_end[1])
    d2 = abs(z_end[1] - z_end[2])
    assert 0.0 < d1 <= c * 0.01
    assert 0.0 < d2 <= c * 0.005
    assert d2 / d1 == pytest.approx(0.5, abs=0.05)
