import numpy as np
import pytest

from ..cf_state import ModelParams
from ..oracles import (
    braking_oracle_table,
    convergence_study,
    gipps_accel_of_spacing,
    gipps_braking_solution,
    gipps_spacing_at_time,
    gipps_speed_of_spacing,
    gipps_time_of_spacing,
    idm_linear_rhs,
    idm_linearize,
    idm_slvp_rhs,
    linear_remainder,
    stopping_identities
)
from ..oracles.idm_linear import STABLE_NODE, STABLE_SPIRAL
from ..utility.exceptions import DomainError, SingularInput

params = ModelParams()


def test_1():  # braking starts one safe stopping distance beyond the comfort spacing
    sol = gipps_braking_solution(params, 30.0)
    assert sol.z0 == pytest.approx(306.461, abs=1e-3)
    ids = stopping_identities(params, 30.0)
    assert ids["abs_error"] <= 1e-9


def test_2():
    sol = gipps_braking_solution(params, 30.0)
    assert gipps_time_of_spacing(sol, sol.z0) == 0.0
    assert gipps_speed_of_spacing(sol, sol.z0) == pytest.approx(30.0)
    assert gipps_speed_of_spacing(sol, params.zeta) == pytest.approx(0.0, abs=1e-12)


def test_accel_is_speed_times_slope():
    sol = gipps_braking_solution(params, 30.0)
    for z in np.linspace(8.0, 300.0, 50):
        z = float(z)
        v = gipps_speed_of_spacing(sol, z)
        dz = 1e-6
        dvdz = (gipps_speed_of_spacing(sol, z + dz) - gipps_speed_of_spacing(sol, z - dz)) / (2 * dz)
        # dz/dt = -v against a stationary leader
        assert gipps_accel_of_spacing(sol, z) == pytest.approx(-v * dvdz, rel=1e-6)


def test_spacing_at_time_inverts_time_of_spacing():
    sol = gipps_braking_solution(params, 30.0)
    assert gipps_spacing_at_time(sol, 0.0) == sol.z0
    prev = sol.z0
    for t in (1.0, 5.0, 10.0, 20.0):
        z = gipps_spacing_at_time(sol, t)
        assert z < prev
        assert gipps_time_of_spacing(sol, z) == pytest.approx(t, abs=1e-8)
        prev = z


def test_braking_domain():
    with pytest.raises(DomainError):
        gipps_braking_solution(params, 0.0)
    with pytest.raises(DomainError):
        gipps_braking_solution(params, 31.0)
    sol = gipps_braking_solution(params, 20.0)
    with pytest.raises(DomainError):
        gipps_time_of_spacing(sol, params.zeta)
    with pytest.raises(DomainError):
        gipps_time_of_spacing(sol, sol.z0 + 1.0)
    with pytest.raises(DomainError):
        gipps_speed_of_spacing(sol, params.zeta - 1.0)
    with pytest.raises(DomainError):
        gipps_spacing_at_time(sol, -1.0)


def test_convergence_is_first_order():
    study = convergence_study(params, 30.0, [0.01, 0.005, 0.0025, 0.00125])
    assert len(study["rows"]) == 4
    errors = [row["error"] for row in study["rows"]]
    assert errors == sorted(errors, reverse=True)
    for ratio in study["ratios"]:
        assert ratio == pytest.approx(0.5, abs=0.1)


@pytest.mark.slow
def test_braking_oracle_table():
    doc = braking_oracle_table(params, 30.0, eps=1e-4)
    assert doc["speed_sup_norm"] <= 1e-2
    assert doc["table"]
    for entry in doc["table"]:
        if entry["quantity"].startswith("v("):
            assert entry["abs_error"] <= 1e-2


def test_idm_eigenvalues():
    res = idm_linearize(params)
    lo, hi = res.eigenvalues
    assert lo.real == pytest.approx(-0.584, abs=1e-3)
    assert hi.real == pytest.approx(-0.584, abs=1e-3)
    assert abs(lo.imag) == pytest.approx(0.624, abs=1e-3)
    assert lo.imag == pytest.approx(-hi.imag)
    assert res.classification == STABLE_SPIRAL
    numeric = res.numeric_eigenvalues()
    for closed in res.eigenvalues:
        assert min(abs(closed - w) for w in numeric) <= 1e-9


def test_idm_stable_node():
    res = idm_linearize(ModelParams(tau=2.0, alpha=1.0))
    assert res.classification == STABLE_NODE
    assert all(abs(e.imag) <= 1e-12 for e in res.eigenvalues)


def test_idm_linearize_singular():
    with pytest.raises(SingularInput):
        idm_linearize(ModelParams(zeta=5.0, zeta_min=5.0, check=False))


def test_idm_fixed_point():
    assert idm_slvp_rhs(params, 0.0, 0.0) == pytest.approx((0.0, 0.0), abs=1e-12)
    assert idm_linear_rhs(params, 0.0, 0.0) == (0.0, 0.0)


def test_linear_remainder_is_quadratic():
    r_big = linear_remainder(params, 0.1, 0.0)
    r_small = linear_remainder(params, 0.01, 0.0)
    assert r_big / 0.1 ** 2 <= 2.0
    assert r_small / r_big == pytest.approx(0.01, rel=0.2)
    rng = np.random.default_rng(3)
    for _ in range(50):
        v, zt = rng.uniform(-0.1, 0.1, 2)
        r = float(np.hypot(v, zt))
        assert linear_remainder(params, float(v), float(zt)) <= 2.0 * r * r
