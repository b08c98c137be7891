import math

import numpy as np
import pytest
from scipy.integrate import quad

from exactbc.grid import TimeScheme
from exactbc.kernel import (KernelAccuracyError, KernelTable, cq_coefficient, cq_table, free_green_1d,
                            kernel_sum_origin, kernel_sums_dft, lattice_ghost_kernel, origin_sums)

SCHEME = TimeScheme.from_scaled(40, 4.0, 0.2)

# frozen values, mu2 = 1000i
ORIGIN_0 = 22.360679774997894 - 22.360679774997894j
DFT_AT_0_1 = np.array([0.4050250434148897 + 3.355420347347591j, 8.40861151956024 + 6.597284460200789j,
                       12.775308498936083 - 3.646057273480389j, 2.6269838829443493 - 5.39194285525077j])
LATTICE_DX_0_01 = np.array([0.7791706030448214 + 0.1764191302855841j, 0.21531038645267775 - 0.13207784047203708j,
                            -0.09944909078252402 + 0.02459416281406129j, 0.09683604530485672 - 0.02755602134248289j])


def test_cq_small_values():
    assert [cq_coefficient(q) for q in range(4)] == [1.0, 0.5, 0.375, 0.3125]


def test_cq_matches_factorial_formula():
    for q in range(31):
        exact = math.factorial(2 * q) / (2**q * math.factorial(q)) ** 2
        assert abs(cq_coefficient(q) - exact) <= 1e-14 * exact
    assert np.allclose(cq_table(31), [math.comb(2 * q, q) / 4**q for q in range(31)], rtol=1e-14, atol=0)


def test_cq_rejects_negative():
    with pytest.raises(ValueError):
        cq_coefficient(-1)


def test_origin_closed_form():
    mu = SCHEME.mu
    assert kernel_sum_origin(0, mu) == pytest.approx(-1j * mu)
    assert kernel_sum_origin(1, mu) == 0
    assert kernel_sum_origin(2, mu) == pytest.approx(-0.5j * mu)
    assert origin_sums(mu, 5)[0] == pytest.approx(ORIGIN_0, rel=1e-14)


@pytest.mark.parametrize("n", [40, 100, 1000])
def test_dft_reproduces_origin_sums(n):
    scheme = TimeScheme(n, 0.01)
    dft = kernel_sums_dft(scheme.mu2, n)
    exact = origin_sums(scheme.mu, n)
    even = exact != 0
    assert np.max(np.abs(dft[even] - exact[even]) / np.abs(exact[even])) < 1e-9
    assert np.max(np.abs(dft[~even])) / abs(scheme.mu) < 1e-9


def test_dft_sums_frozen():
    assert np.allclose(kernel_sums_dft(SCHEME.mu2, 4, 0.1), DFT_AT_0_1, rtol=1e-10)
    assert np.allclose(lattice_ghost_kernel(SCHEME.mu2, 4, 0.01), LATTICE_DX_0_01, rtol=1e-10)


def _contour_coefficient(p, x, k2=0.0, radius=0.5):
    mu2 = SCHEME.mu2

    def gen(th):
        w = radius * np.exp(1j * th)
        energy = mu2 * (1 - w) / (1 + w) - k2
        return 2 * mu2 / (1 + w) * free_green_1d(energy, x) * w**-p

    re = quad(lambda t: gen(t).real, 0, 2 * np.pi, limit=400)[0]
    im = quad(lambda t: gen(t).imag, 0, 2 * np.pi, limit=400)[0]
    return (re + 1j * im) / (2 * np.pi)


@pytest.mark.parametrize("x,k2", [(0.1, 0.0), (0.3, 0.0), (0.0, 50.0), (0.2, 200.0)])
def test_dft_matches_contour_quadrature(x, k2):
    dft = kernel_sums_dft(SCHEME.mu2, 6, x, k2)
    for p in range(6):
        ref = _contour_coefficient(p, x, k2)
        assert abs(dft[p] - ref) <= 1e-8 * max(abs(ref), 1.0)


def test_lattice_root_inside_unit_circle():
    ell = lattice_ghost_kernel(SCHEME.mu2, 64, 0.01)
    # generating function of a decaying root: coefficients must decay
    assert abs(ell[-1]) < abs(ell[0])


def test_table_caches_and_checks():
    t = KernelTable(SCHEME.mu2, 40, distances=(0.0, 0.2), k_transverse2=(0.0, 25.0))
    assert t.check_origin() < 1e-9
    assert t.sums(0.2, 25.0) is t.cache[(0.2, 25.0)]
    assert t.kernel_sum_dft(0) == pytest.approx(-1j * SCHEME.mu, rel=1e-9)
    with pytest.raises(IndexError):
        t.kernel_sum_dft(40)
    assert np.array_equal(t.boundary_sums(0.0), origin_sums(SCHEME.mu, 40))


def test_weak_damping_rejected():
    with pytest.raises(ValueError):
        KernelTable(SCHEME.mu2, 40, eta=1e-3)


def test_inaccurate_dft_raises():
    # too small a transform for the requested terms aliases badly
    with pytest.raises((KernelAccuracyError, ValueError)):
        KernelTable(SCHEME.mu2, 40, dft_size=40, eta=0.5)


def test_dump_writes_table(tmp_path):
    t = KernelTable(SCHEME.mu2, 10, distances=(0.0, 0.1))
    path = tmp_path / "k.dat"
    t.dump(path, (0.0, 0.1))
    data = np.loadtxt(path)
    assert data.shape == (10, 6)
    assert data[2, 1] == 0.5
