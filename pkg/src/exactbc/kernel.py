"""Discrete-time free propagator sums used by the boundary closure.

The closure at a boundary point needs ``S_p(x) = K_p(x) + K_{p+1}(x)``, the sum
of two consecutive Crank-Nicolson free propagators.  At ``x = 0`` in one
dimension it has the closed form ``S_{2q} = -i mu C_q``, ``S_{2q+1} = 0`` with
``C_q = (2q)! / (2^q q!)^2``.  For other arguments, or with a transverse
momentum shifting the energy, the sums come from a damped discrete Fourier
transform over the step index::

    S_p(x) = e^{p eta}/N sum_l e^{-2 pi i l p / N} 2 mu^2/(1 + w_l) G(k_l^2, x)
    w_l = e^{-eta} e^{2 pi i l / N},  k_l^2 = mu^2 (1 - w_l) / (1 + w_l)

with ``G`` the outgoing free Green function.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .grid import principal_mu

logger = logging.getLogger(__name__)

#: relative tolerance of the DFT sums against the closed form at the origin
ORIGIN_CHECK_TOL = 1e-9


class KernelAccuracyError(RuntimeError):
    """The damped DFT failed to reproduce the closed-form origin kernel."""


def cq_coefficient(q: int) -> float:
    """``(2q)! / (2^q q!)^2`` by the recurrence ``C_q = C_{q-1} (2q-1)/(2q)``."""
    if q < 0:
        raise ValueError("q must be non-negative")
    c = 1.0
    for j in range(1, q + 1):
        c *= (2 * j - 1) / (2 * j)
    return c


def cq_table(n: int) -> np.ndarray:
    """``C_0 .. C_{n-1}``."""
    if n <= 0:
        return np.zeros(0)
    j = np.arange(1, n)
    return np.concatenate(([1.0], np.cumprod((2 * j - 1) / (2 * j))))


def kernel_sum_origin(p: int, mu: complex) -> complex:
    """Closed-form ``K_p(0) + K_{p+1}(0)`` in one dimension."""
    if p % 2:
        return 0j
    return -1j * mu * cq_coefficient(p // 2)


def origin_sums(mu: complex, n: int) -> np.ndarray:
    """Vector of :func:`kernel_sum_origin` for ``p = 0 .. n-1``."""
    out = np.zeros(n, dtype=complex)
    out[::2] = -1j * mu * cq_table((n + 1) // 2)
    return out


def outgoing_sqrt(energy):
    """Square root with non-negative imaginary part (outgoing or decaying)."""
    root = np.sqrt(np.asarray(energy, dtype=complex))
    return np.where(root.imag < 0, -root, root)


def free_green_1d(energy, x):
    """Outgoing free Green function ``exp(i sqrt(E)|x|) / (2 i sqrt(E))``."""
    k = outgoing_sqrt(energy)
    return np.exp(1j * k * np.abs(x)) / (2j * k)


def default_dft_size(n_steps: int) -> int:
    size = 1
    while size < 2 * n_steps:
        size *= 2
    return size


def default_eta(dft_size: int) -> float:
    return 25.0 / dft_size


def _dft_nodes(mu2, dft_size, eta):
    w = np.exp(-eta) * np.exp(2j * np.pi * np.arange(dft_size) / dft_size)
    energy = mu2 * (1.0 - w) / (1.0 + w)
    return w, energy


def _invert(values, n_terms, eta):
    dft_size = values.size
    coeffs = np.fft.fft(values)[:n_terms] / dft_size
    return coeffs * np.exp(eta * np.arange(n_terms))


def kernel_sums_dft(mu2, n_terms, x=0.0, k_transverse2=0.0, *, dft_size=None, eta=None, derivative=False):
    """``S_p(x)`` for ``p = 0 .. n_terms-1`` by the damped DFT.

    ``k_transverse2`` shifts the energy ``k^2 -> k^2 + k_y^2`` for a transverse
    Fourier mode.  With ``derivative=True`` the x-derivative of the sums
    (for ``x > 0``) is returned instead.
    """
    dft_size = dft_size or default_dft_size(n_terms)
    eta = default_eta(dft_size) if eta is None else eta
    if n_terms > dft_size:
        raise ValueError("n_terms exceeds the DFT size")
    w, energy = _dft_nodes(mu2, dft_size, eta)
    energy = energy - k_transverse2
    weight = 2.0 * mu2 / (1.0 + w)
    if derivative:
        green = 0.5 * np.exp(1j * outgoing_sqrt(energy) * abs(x))
    else:
        green = free_green_1d(energy, x)
    return _invert(weight * green, n_terms, eta)


def lattice_ghost_kernel(mu2, n_terms, dx, k_transverse2=0.0, *, dft_size=None, eta=None):
    """Convolution weights ``l_m`` of the exact closure for the 3-point Laplacian.

    For an outgoing solution of the fully discrete exterior problem the first
    exterior node obeys ``Psi^n_{J+1} = sum_m l_m Psi^{n-m}_J``.
    """
    dft_size = dft_size or default_dft_size(n_terms)
    eta = default_eta(dft_size) if eta is None else eta
    w, energy = _dft_nodes(mu2, dft_size, eta)
    half_trace = 1.0 - 0.5 * (energy - k_transverse2) * dx * dx
    root = np.sqrt(half_trace * half_trace - 1.0 + 0j)
    kappa = half_trace - root
    swap = np.abs(kappa) > 1.0
    kappa[swap] = (half_trace + root)[swap]
    return _invert(kappa, n_terms, eta)


def _bin(value: float) -> float:
    return round(float(value), 12)


@dataclass
class KernelTable:
    """Precomputed kernel sums for one time scheme.

    All requested ``(distance, k_transverse2)`` combinations are evaluated at
    construction; afterwards the table is only read.  The DFT route is checked
    against the closed form at the origin and a :class:`KernelAccuracyError` is
    raised when they disagree by more than ``ORIGIN_CHECK_TOL``.
    """

    mu2: complex
    n_steps: int
    distances: tuple = (0.0,)
    k_transverse2: tuple = (0.0,)
    dft_size: int | None = None
    eta: float | None = None
    cq: np.ndarray = field(init=False, repr=False)
    cache: dict = field(init=False, repr=False)

    def __post_init__(self):
        if self.n_steps < 1:
            raise ValueError("n_steps must be positive")
        self.dft_size = self.dft_size or default_dft_size(self.n_steps)
        self.eta = default_eta(self.dft_size) if self.eta is None else self.eta
        if np.exp(-self.dft_size * self.eta) > 1e-8:
            raise ValueError(f"damping too weak: exp(-N eta) = {np.exp(-self.dft_size * self.eta):.2e}")
        self.cq = cq_table(self.n_steps // 2 + 1)
        self.cache = {}
        self.check_origin()
        for d in self.distances:
            for k2 in self.k_transverse2:
                self.cache[(_bin(abs(d)), _bin(k2))] = self._compute(abs(d), k2)
                self.cache[(_bin(abs(d)), _bin(k2), "d")] = self._compute(abs(d), k2, derivative=True)

    @property
    def mu(self) -> complex:
        return principal_mu(self.mu2)

    def _compute(self, x, k2, derivative=False):
        return kernel_sums_dft(self.mu2, self.n_steps, x, k2, dft_size=self.dft_size, eta=self.eta,
                               derivative=derivative)

    def check_origin(self) -> float:
        """Largest relative deviation of the DFT origin sums from ``-i mu C_q``."""
        exact = origin_sums(self.mu, self.n_steps)
        dft = self._compute(0.0, 0.0)
        scale = np.where(exact != 0, np.abs(exact), abs(self.mu))
        err = float(np.max(np.abs(dft - exact) / scale))
        if err > ORIGIN_CHECK_TOL:
            raise KernelAccuracyError(f"DFT kernel deviates from the closed form by {err:.2e} (relative)")
        return err

    def sums(self, x=0.0, k_transverse2=0.0, derivative=False) -> np.ndarray:
        """``S_p(x)`` for ``p < n_steps``; uncached arguments are computed, not stored."""
        key = (_bin(abs(x)), _bin(k_transverse2)) + (("d",) if derivative else ())
        if key in self.cache:
            return self.cache[key]
        return self._compute(abs(x), k_transverse2, derivative)

    def kernel_sum_dft(self, p: int, x=0.0, k_transverse2=0.0) -> complex:
        if not 0 <= p < self.n_steps:
            raise IndexError(f"p={p} outside the table (n_steps={self.n_steps})")
        return complex(self.sums(x, k_transverse2)[p])

    def boundary_sums(self, k_transverse2=0.0) -> np.ndarray:
        """Origin sums used by the closure; closed form when there is no transverse shift."""
        if k_transverse2 == 0.0:
            return origin_sums(self.mu, self.n_steps)
        return self.sums(0.0, k_transverse2)

    def dump(self, path, distances=(0.0,)) -> None:
        """Write ``p, C_{p/2}, Re/Im S_p(d)...`` as a whitespace-delimited table."""
        p = np.arange(self.n_steps)
        cq = np.where(p % 2 == 0, cq_table(self.n_steps)[p // 2], 0.0)
        cols = [p, cq]
        names = ["p", "C_p/2"]
        for d in distances:
            s = self.sums(d)
            cols += [s.real, s.imag]
            names += [f"Re_S(x={d:g})", f"Im_S(x={d:g})"]
        header = (f"mu2={self.mu2!r} n_steps={self.n_steps} dft_size={self.dft_size} eta={self.eta!r}\n"
                  + " ".join(names))
        np.savetxt(path, np.column_stack(cols), header=header)
