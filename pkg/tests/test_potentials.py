import numpy as np
import pytest

from exactbc.potentials import (DoubleWell, DrivenDelta, DrivenGaussian, NoPotential, RegularizedDelta,
                                StaticGaussian, eval_potential, is_static)


def test_static_gaussian_centre():
    assert eval_potential(StaticGaussian(-150, 0.05), 0.0) == -150


def test_driven_gaussian_vanishes_at_sine_minimum():
    spec = DrivenGaussian(-200, 0.05, 0.05)
    t = 0.75 / 0.05  # sin(2 pi omega t) = -1
    assert eval_potential(spec, 0.0, t) == pytest.approx(0.0, abs=1e-12)
    assert not is_static(spec)


def test_double_well_peak():
    v = eval_potential(DoubleWell(150, 0.05, 0.5), 0.5)
    assert v == pytest.approx(150.0, rel=1e-15)


def test_no_potential_is_zero():
    assert np.all(eval_potential(NoPotential(), np.linspace(-1, 1, 7)) == 0)


def test_delta_cannot_be_sampled():
    with pytest.raises(TypeError):
        eval_potential(DrivenDelta(2.0), 0.0)


def test_regularized_delta_has_unit_weight():
    x = np.linspace(-1, 1, 4001)
    v = eval_potential(RegularizedDelta(2.0, 0.05), x)
    assert np.trapezoid(v, x) == pytest.approx(-2.0, rel=1e-10)


def test_drive_strength_profile():
    d = DrivenDelta(2.0, amplitude=1.0)
    assert d.omega0 == 1.0
    assert d.strength(0.0) == 2.0
    assert d.strength(np.pi / 0.7) == pytest.approx(3.0)


@pytest.mark.parametrize("bad", [lambda: StaticGaussian(1, 0), lambda: DoubleWell(1, -1, 0.5),
                                 lambda: DrivenDelta(0.0)])
def test_invalid_parameters(bad):
    with pytest.raises(ValueError):
        bad()
