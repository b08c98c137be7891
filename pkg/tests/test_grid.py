import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from exactbc.grid import (ComplexField, Grid1D, TimeScheme, WavePacketSpec, analytic_free_density,
                          analytic_free_packet, make_gaussian, principal_mu, scaled_to_time, time_to_scaled)


def test_grid_endpoints_and_spacing():
    g = Grid1D(201)
    x = g.points
    assert x[0] == -1.0 and x[-1] == 1.0
    assert g.dx == pytest.approx(0.01)
    assert np.allclose(np.diff(x), g.dx, rtol=0, atol=1e-15)


@pytest.mark.parametrize("nx", [0, 1, 2])
def test_grid_rejects_too_few_points(nx):
    with pytest.raises(ValueError):
        Grid1D(nx)


def test_widened_grid_shares_nodes():
    g = Grid1D(201)
    w, off = g.widened(8)
    assert w.a >= 8.0
    assert w.dx == pytest.approx(g.dx, rel=1e-14)
    assert np.allclose(w.points[off: off + g.nx], g.points, atol=1e-13)


def test_field_rejects_bad_values():
    g = Grid1D(5)
    with pytest.raises(ValueError):
        ComplexField(g, np.zeros(4))
    with pytest.raises(ValueError):
        ComplexField(g, np.array([0, 1, np.nan, 0, 0]))


def test_time_scheme_mu2_is_positive_imaginary():
    s = TimeScheme.from_scaled(40, 4.0, 0.2)
    assert s.mu2.real == 0 and s.mu2.imag > 0
    # 4 i N / (sigma0^2 T~)
    assert s.mu2 == pytest.approx(4j * 40 / (0.2**2 * 4.0))
    assert abs(s.mu2) == pytest.approx(4 * 0.5 / s.dt)


@given(st.floats(1e-6, 1e6))
def test_principal_mu_first_quadrant(y):
    mu = principal_mu(1j * y)
    assert mu.real > 0 and mu.imag > 0
    assert mu * mu == pytest.approx(1j * y, rel=1e-12)


def test_scaled_time_round_trip():
    assert time_to_scaled(scaled_to_time(3.7, 0.15), 0.15) == pytest.approx(3.7)


def test_gaussian_peak_value_and_symmetry():
    g = Grid1D(201)
    f = make_gaussian(g, WavePacketSpec(0.0, 0.2, 0.0))
    assert f.values[100] == pytest.approx(np.pi**-0.25 * 0.2**-0.5)
    assert f.values[100] == pytest.approx(1.6796, abs=1e-4)
    assert np.allclose(f.values, f.values[::-1])


def test_gaussian_norm_when_supported():
    g = Grid1D(401)
    f = make_gaussian(g, WavePacketSpec(0.1, 0.15, 3.0))
    assert f.norm() == pytest.approx(1.0, abs=1e-6)


def test_leaking_packet_warns(caplog):
    caplog.set_level("WARNING", logger="exactbc")
    make_gaussian(Grid1D(101), WavePacketSpec(0.9, 0.5, 0.0))
    assert "leaks" in caplog.text


def test_analytic_density_examples():
    spec = WavePacketSpec(0.0, 0.2, 0.0)
    assert analytic_free_density(spec, 0.0, 0.0) == pytest.approx(1 / (np.sqrt(np.pi) * 0.2))
    # width grows by sqrt(2) at t~ = 1
    assert analytic_free_density(spec, 0.0, 1.0) == pytest.approx(1 / (np.sqrt(np.pi) * 0.2 * np.sqrt(2)))
    with pytest.raises(ValueError):
        analytic_free_density(spec, 0.0, -1.0)


@settings(max_examples=25)
@given(st.floats(-0.5, 0.5), st.floats(0.1, 0.3), st.floats(-1, 1), st.floats(0, 5))
def test_analytic_packet_matches_density(x0, sigma0, v_s, t_s):
    spec = WavePacketSpec.from_scaled(x0, sigma0, v_s)
    x = np.linspace(-2, 2, 41)
    amp = analytic_free_packet(spec, x, scaled_to_time(t_s, sigma0))
    assert np.allclose(np.abs(amp) ** 2, analytic_free_density(spec, x, t_s), rtol=1e-9, atol=1e-12)


def test_packet_velocity_conversion():
    spec = WavePacketSpec.from_scaled(0.0, 0.2, 0.25)
    assert spec.v == pytest.approx(12.5)
    assert spec.k0 == pytest.approx(6.25)
    assert spec.v_scaled == pytest.approx(0.25)
