import math

import pytest

import planarspin as ps


def test_window_numbers():
    w = ps.current_window(2000.0, 0.1)
    assert 47 < w["low"] < 60
    assert 6.3e11 < w["high"] < 7.6e11
    assert ps.wire_feasibility(5e6, 0.005) == pytest.approx(392.7, rel=1e-4)


def test_orbit_round_trip():
    params = ps.OrbitParams(current=400.0)
    assert ps.eccentricity(params) == pytest.approx(1.7357e9, rel=1e-4)
    traj = ps.integrate_orbit(params)
    assert traj["energy_drift"] < 1e-9
    conic = ps.conic_orbit(params)
    for theta, r in zip(traj["theta"], traj["r"]):
        assert conic.radius(theta) == pytest.approx(r, rel=1e-8)


def test_loop_phase_and_winding():
    square = [(0.1, 0.1), (-0.1, 0.1), (-0.1, -0.1), (0.1, -0.1), (0.1, 0.1)]
    assert ps.winding_number(square) == 1
    assert ps.line_integral_connection(square) == pytest.approx(-math.pi)


def test_adiabaticity():
    value = ps.adiabaticity_functional((0.0, -0.1), (2000.0, 0.0), 400.0)
    assert value == pytest.approx(0.1366, rel=1e-3)
    check = ps.matrix_element_check((0.03, 0.2), (1500.0, -300.0), 400.0)
    assert check["relative_difference"] < 1e-10


def test_interference():
    geo = ps.build_geometry(0.2, 0.1)
    assert geo.symmetric()
    analytic = ps.full_experiment(geo, 400.0, 2000.0)
    assert analytic["I_D1"] == 0.0
    propagated = ps.full_experiment(geo, 400.0, 2000.0, mode="propagated")
    assert propagated["I_D1"] < 0.05
    assert propagated["I_D1"] + propagated["I_D2"] == pytest.approx(1.0, abs=1e-12)


def test_errors_carry_kind():
    with pytest.raises(ps.Error) as info:
        ps.build_geometry(0.2, 0.1, wire_offset=(0.0, 0.1))
    assert info.value.kind == "geometry"
    with pytest.raises(ps.Error):
        ps.OrbitParams(b=0.001)


def test_orbit_spin_pass():
    out = ps.propagate_orbit_spin(ps.OrbitParams(current=400.0))
    assert out["final_fidelity"] > 0.95
    assert out["max_norm_error"] < 1e-10
