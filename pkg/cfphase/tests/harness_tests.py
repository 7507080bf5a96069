import json

import pytest

from ..cf_state import ModelParams
from ..harness import (
    Cell,
    Fringe,
    SCHEMA_VERSION,
    SweepSpec,
    build_report,
    is_compliant_start,
    min_beta_for_compliance,
    sweep,
    without_timestamp,
    write_report
)
from ..harness.fringe import SIMULATED, TRUNCATED, DOMAIN_EXCLUDED, NON_COMPLIANT
from ..harness.report import report_meta
from ..models.model_types import ModelId
from ..principles import PrincipleId, ZEROTH_FIRST_ORDER
from ..settings import Settings
from ..utility.exceptions import ConfigError, DomainError, SearchError

params = ModelParams()


def _spec(model, v0_range, z0_range, v0_count, z0_count, eps=0.01, t_end=20.0, **kwargs):
    return SweepSpec(model, params, eps, v0_range, z0_range, v0_count, z0_count, t_end, **kwargs)


def test_1():
    fringe = Fringe()
    fringe.add(Cell(2, 0.0, 7.0, TRUNCATED))
    fringe.add(Cell(0, 0.0, 7.0, SIMULATED))
    fringe.add(Cell(1, -1.0, 7.0, DOMAIN_EXCLUDED))
    fringe.add(Cell(3, 30.0, 7.0, NON_COMPLIANT))
    assert fringe.num_cells == 4
    assert [c.index for c in fringe.cells()] == [0, 1, 2, 3]
    assert [c.index for c in fringe.audited] == [0, 2]
    assert fringe.last_added.index == 3
    assert fringe.counts() == {SIMULATED: 1, TRUNCATED: 1, DOMAIN_EXCLUDED: 1, NON_COMPLIANT: 1}
    with pytest.raises(ValueError):
        fringe.add(Cell(4, 0.0, 7.0, "lost"))


def test_2():
    assert is_compliant_start(0.0, 7.0, params)
    assert is_compliant_start(20.0, 55.0, params)
    assert not is_compliant_start(30.0, 54.0, params)
    assert not is_compliant_start(-0.1, 55.0, params)
    assert not is_compliant_start(0.0, 6.0, params)


def test_report_layout(tmp_path):
    Settings().set("cfphase.report.timestamp", True)
    try:
        meta = report_meta(model="newell")
    finally:
        Settings().reset("cfphase.report.timestamp")
    doc = build_report(meta)
    assert doc["schema_version"] == SCHEMA_VERSION == 1
    assert set(doc) == {"schema_version", "meta", "grid", "cells", "aggregates", "findings"}
    assert "generated_at" in doc["meta"]
    assert "generated_at" not in without_timestamp(doc)["meta"]
    assert doc["meta"]["model"] == "newell"

    path = tmp_path / "r.json"
    write_report(str(path), doc)
    assert json.loads(path.read_text())["meta"]["tool"] == "cfphase"


def test_report_flags_onset_threshold():
    meta = report_meta()
    assert meta["onset_accel_threshold"] == 0.0
    assert meta["onset_min_duration"] == 0.5
    assert any("threshold 0 m/s^2 in effect" in n for n in meta["notes"])
    assert "< -0 m/s^2" in meta["onset_rule"]

    Settings().set("cfphase.audit.onset_accel_threshold", 0.05)
    try:
        meta = report_meta()
    finally:
        Settings().reset("cfphase.audit.onset_accel_threshold")
    assert meta["onset_accel_threshold"] == 0.05
    assert not any("in effect" in n for n in meta["notes"])


def test_newell_compliant_sweep():
    rep = sweep(_spec(ModelId.Newell, (0.0, 30.0), (7.0, 107.0), 4, 3,
                      eps=0.1, compliant_only=True), jobs=1)
    counts = rep.fringe.counts()
    assert counts[SIMULATED] == 9
    assert counts[NON_COMPLIANT] == 3
    for p in ZEROTH_FIRST_ORDER:
        assert rep.pass_rate(p) == 1.0
    agg = rep.aggregates()
    assert agg["cells"] == 12
    assert agg["principles"]["CJS"] == {"audited": 9, "failed": 0, "pass_rate": 1.0}


def test_ba_newell_compliant_sweep():
    rep = sweep(_spec(ModelId.BANewell, (0.0, 30.0), (7.0, 107.0), 3, 3,
                      eps=0.01, compliant_only=True), jobs=1)
    for p in ZEROTH_FIRST_ORDER:
        assert rep.pass_rate(p) == 1.0


def test_bda_newell_sweep_finds_collisions():
    rep = sweep(_spec(ModelId.BDANewell, (0.0, 30.0), (55.0, 105.0), 4, 2, t_end=30.0), jobs=1)
    cjs = rep.failing_cells(PrincipleId.ComfortJamSpacing)
    mjs = rep.failing_cells(PrincipleId.MinimumJamSpacing)
    assert cjs and mjs
    assert any(c.v0 == 30.0 and c.z0 == 55.0 for c in mjs)
    worst = [c for c in mjs if c.v0 == 30.0 and c.z0 == 55.0][0]
    assert worst.results["MJS"]["witness"]["observed"] < params.zeta_min
    assert rep.pass_rate(PrincipleId.ComfortJamSpacing) < 1.0


def test_idm_sweep_excludes_singular_cells():
    rep = sweep(_spec(ModelId.IDM, (0.0, 0.0), (4.0, 10.0), 1, 2, eps=0.001, t_end=5.0), jobs=1)
    counts = rep.fringe.counts()
    assert counts[DOMAIN_EXCLUDED] == 1
    assert counts[SIMULATED] == 1
    excluded = rep.fringe.excluded[0]
    assert excluded.z0 == 4.0
    assert "singular" in excluded.reason


def test_negative_speed_excluded():
    rep = sweep(_spec(ModelId.Newell, (-1.0, 0.0), (7.0, 7.0), 2, 1, eps=0.1, t_end=1.0), jobs=1)
    assert [c.status for c in rep.cells] == [DOMAIN_EXCLUDED, SIMULATED]
    assert rep.cells[0].reason == "negative initial speed"


def test_principle_subset():
    rep = sweep(_spec(ModelId.Newell, (0.0, 10.0), (30.0, 30.0), 2, 1, eps=0.1, t_end=2.0,
                      principles={PrincipleId.ComfortJamSpacing}), jobs=1)
    assert set(rep.cells[0].results) == {"CJS"}
    assert list(rep.aggregates()["principles"]) == ["CJS"]
    assert rep.pass_rate(PrincipleId.SpeedLimit) is None


@pytest.mark.parametrize("changes", [
    {"v0_count": 0},
    {"z0_range": (10.0, 5.0)},
    {"t_end": 0.0},
    {"clamp_policy": "brake-hard"},
])
def test_sweep_spec_rejected(changes):
    spec = _spec(ModelId.Newell, (0.0, 10.0), (7.0, 30.0), 2, 2)
    for name, value in changes.items():
        setattr(spec, name, value)
    with pytest.raises(ConfigError):
        sweep(spec, jobs=1)


def test_sweep_is_deterministic():
    Settings().set("cfphase.report.timestamp", False)
    try:
        spec = _spec(ModelId.BDANewell, (0.0, 30.0), (7.0, 60.0), 3, 2, t_end=10.0)
        first = sweep(spec, jobs=1).as_dict()
        second = sweep(spec, jobs=1).as_dict()
        parallel = sweep(spec, jobs=2).as_dict()
    finally:
        Settings().reset("cfphase.report.timestamp")
    assert json.dumps(first, sort_keys=True) == json.dumps(second, sort_keys=True)
    assert json.dumps(first, sort_keys=True) == json.dumps(parallel, sort_keys=True)


def test_3():  # minimum comfortable deceleration from speed v0 at the equilibrium spacing
    res = min_beta_for_compliance(params, 30.0, 0.001)
    assert res.beta == pytest.approx(9.375, abs=0.1)
    assert res.closed_form == pytest.approx(9.375)
    assert res.relative_error < 0.01
    assert res.converged
    assert res.as_dict()["iterations"] == res.iterations


def test_min_beta_scales_with_speed():
    fast = min_beta_for_compliance(params, 30.0, 0.001)
    slow = min_beta_for_compliance(params, 15.0, 0.001)
    assert fast.beta / slow.beta == pytest.approx(2.0, rel=0.02)


def test_min_beta_edges():
    res = min_beta_for_compliance(params, 0.0, 0.001)
    assert res.beta == 0.0
    assert res.iterations == 0
    with pytest.raises(DomainError):
        min_beta_for_compliance(params, 40.0, 0.001)
    with pytest.raises(SearchError):
        min_beta_for_compliance(params, 30.0, 0.001, bracket=(10.0, 20.0))


@pytest.mark.slow
@pytest.mark.parametrize("model", [ModelId.Newell, ModelId.BANewell])
def test_compliant_grid_keeps_principles(model):
    rep = sweep(_spec(model, (0.0, 30.0), (7.0, 120.0), 20, 20, eps=0.01, t_end=30.0,
                      compliant_only=True))
    assert rep.fringe.counts()[SIMULATED] > 0
    for p in ZEROTH_FIRST_ORDER:
        assert rep.pass_rate(p) == 1.0
