import numpy as np
import pytest
from hypothesis import given, strategies as st

from exactbc.delta import (DeltaRun, autocorrelation, autocorrelation_series, bound_phase, delta_offorigin,
                           delta_recurrence_step, pulsed_run, regularized_delta_oracle)
from exactbc.grid import TimeScheme
from exactbc.kernel import cq_table
from exactbc.potentials import DrivenDelta

# frozen: lambda0 = 2, A = 4, 1000 steps over 40 pulses
CHI_FROZEN = np.array([0.00171367529785729 + 0.0084759453679248j, -0.01907308344264736 + 0.07928754363953562j,
                       -0.26587158707693415 - 0.7899024494754463j, -0.07410725982466025 + 1.495879673465063j,
                       0.9847566044152064 - 0.2789045012745976j])
AUTO_FROZEN = 0.10564558122369172 + 0.533257955700048j


@given(st.floats(1e-3, 1e6), st.floats(0, 1e3))
def test_bound_phase_unit_modulus(y, omega0):
    assert abs(bound_phase(1j * y, omega0)) == pytest.approx(1.0, abs=1e-15)


def test_bound_phase_limits():
    assert bound_phase(5j, 0.0) == 1
    # energy -omega0 rotates as exp(+i omega0 t)
    for dt in (1e-2, 1e-3, 1e-4):
        step = np.angle(bound_phase(2j / dt, 1.5))
        assert step == pytest.approx(1.5 * dt, rel=dt)


def test_undriven_perturbation_vanishes():
    run = pulsed_run(2.0, 0.0).run()
    assert np.all(run.chi == 0)
    assert np.allclose(np.abs(autocorrelation_series(run)), 1.0, atol=1e-15)


def test_undriven_offorigin_is_rotating_bound_state():
    run = pulsed_run(2.0, 0.0, n_steps=50, n_pulses=2).run()
    for x in (0.3, -1.0):
        exact = run.phase**37 * np.sqrt(1.0) * np.exp(-abs(x))
        assert delta_offorigin(run, x, 37) == pytest.approx(exact, rel=1e-14)


def _reference_recurrence(run):
    """Direct transcription with the full sums (q = 0 kept inside the sums)."""
    lam, lam0, mu = run.lambda_n, run.lambda0, run.mu
    phi = run.phi_origin(np.arange(lam.size))
    cq = cq_table(lam.size)
    chi = np.zeros(lam.size, dtype=complex)
    for n in range(1, lam.size):
        rest = 0j
        for q in range(1, (n - 1) // 2 + 1):
            m = n - 2 * q
            rest += cq[q] * lam[m] * (chi[m] + chi[m - 1])
        src = 0j
        for q in range(0, (n - 1) // 2 + 1):
            m = n - 2 * q
            src += cq[q] * (lam[m] - lam0) * (phi[m] + phi[m - 1])
        chi[n] = (lam[n] * chi[n - 1] + rest + src) / (-2j * mu - lam[n])
    return chi


def test_recurrence_matches_direct_transcription():
    run = pulsed_run(2.0, 3.0, n_steps=120, n_pulses=5).run()
    assert np.allclose(run.chi, _reference_recurrence(run), rtol=1e-12, atol=1e-14)


def test_recurrence_frozen():
    run = pulsed_run(2.0, 4.0).run()
    assert np.allclose(run.chi[[1, 2, 10, 100, 1000]], CHI_FROZEN, rtol=1e-9)
    assert autocorrelation(run, 1000) == pytest.approx(AUTO_FROZEN, rel=1e-9)


def test_recurrence_order_is_enforced():
    run = pulsed_run(2.0, 1.0, n_steps=10, n_pulses=1)
    with pytest.raises(ValueError):
        delta_recurrence_step(run, 3)


def test_recurrence_is_fast():
    import time
    t0 = time.perf_counter()
    pulsed_run(2.0, 4.0).run()
    assert time.perf_counter() - t0 < 1.0


def test_perturbation_continuous_in_amplitude():
    peaks = [np.abs(pulsed_run(2.0, a, n_steps=200, n_pulses=8).run().chi).max() for a in (1e-2, 1e-4, 1e-6)]
    assert peaks[0] > peaks[1] > peaks[2]
    # linear response: chi shrinks in proportion to the drive
    assert peaks[1] / peaks[2] == pytest.approx(100, rel=1e-3)
    assert peaks[0] / peaks[1] == pytest.approx(100, rel=0.05)


def test_offorigin_continuous_at_origin():
    run = pulsed_run(2.0, 1.0, n_steps=300, n_pulses=12).run()
    near = delta_offorigin(run, 1e-7, 300)
    assert near == pytest.approx(run.psi_origin()[300], rel=1e-5)


def test_offorigin_far_and_early_is_tiny():
    run = pulsed_run(2.0, 4.0).run()
    chi_far = delta_offorigin(run, 40.0, 3) - run.phi_origin(3) * np.exp(-40.0)
    assert abs(chi_far) < 1e-10


def test_autocorrelation_starts_at_one():
    run = pulsed_run(2.0, 4.0, n_steps=20, n_pulses=1).run()
    assert autocorrelation(run, 0) == 1
    with pytest.raises(IndexError):
        autocorrelation(run, 21)


def test_series_export(tmp_path):
    run = pulsed_run(2.0, 4.0, n_steps=20, n_pulses=1).run()
    path = tmp_path / "s.dat"
    run.write_series(path)
    data = np.loadtxt(path)
    assert data.shape == (21, 4)
    assert data[0, 2] == 1.0 and data[0, 3] == 1.0


def test_from_drive_uses_mid_step_strength():
    spec = DrivenDelta(2.0, 1.0)
    scheme = TimeScheme(10, 0.3)
    run = DeltaRun.from_drive(spec, scheme)
    assert run.lambda_n[4] == pytest.approx(spec.strength(3.5 * 0.3))


def test_regularized_oracle_converges():
    run = pulsed_run(2.0, 4.0, n_steps=200, n_pulses=8).run()
    spec = DrivenDelta(2.0, 4.0)
    series = run.series()
    errs = []
    for b in (0.1, 0.05):
        origin, auto = regularized_delta_oracle(run, spec, b)
        errs.append((np.abs(origin - series[:, 2]).max(), np.abs(np.abs(auto) ** 2 - series[:, 3]).max()))
    assert errs[1][0] < errs[0][0]
    assert errs[1][1] < errs[0][1]
