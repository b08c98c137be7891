"""Grids, time schemes and initial wave packets.

Units are hbar = 2m = 1 throughout, so the Schrodinger equation reads
``i dPsi/dt = -Psi'' + V Psi``.  A Gaussian packet of width ``sigma0`` has the
natural dimensionless time ``t_scaled = 2 t / sigma0**2``; scenario parameters
are usually quoted in that scaled time and converted with
:func:`scaled_to_time`.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

logger = logging.getLogger(__name__)

#: relative boundary amplitude above which an initial state counts as leaking
SUPPORT_TOL = 1e-8


def scaled_to_time(t_scaled, sigma0):
    """Convert dimensionless packet time ``t~`` to time in hbar = 2m = 1 units."""
    return t_scaled * sigma0**2 / 2.0


def time_to_scaled(t, sigma0):
    return 2.0 * t / sigma0**2


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid on ``[-a, a]`` with ``nx`` nodes (both end points included)."""

    nx: int
    a: float = 1.0

    def __post_init__(self):
        if self.nx < 3:
            raise ValueError(f"nx must be >= 3, got {self.nx}")
        if not self.a > 0:
            raise ValueError(f"half-width must be positive, got {self.a}")

    @property
    def dx(self) -> float:
        return 2.0 * self.a / (self.nx - 1)

    @property
    def points(self) -> np.ndarray:
        x = -self.a + self.dx * np.arange(self.nx)
        x[-1] = self.a
        return x

    def widened(self, factor: float) -> tuple["Grid1D", int]:
        """Grid covering at least ``[-factor*a, factor*a]`` with the same spacing.

        Returns the wide grid and the index of ``-a`` in it; its nodes coincide
        with this grid's nodes up to round-off.
        """
        pad = int(np.ceil((factor - 1.0) * self.a / self.dx - 1e-9))
        return Grid1D(nx=self.nx + 2 * pad, a=self.a + pad * self.dx), pad


@dataclass(frozen=True)
class ComplexField:
    """A wavefunction sampled on a :class:`Grid1D`."""

    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.grid.nx,):
            raise ValueError(f"expected {self.grid.nx} values, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("field contains non-finite values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def norm(self) -> float:
        """Trapezoidal L2 norm squared on the grid."""
        return trapezoid_norm(self.values, self.grid.dx)


def trapezoid_norm(values, dx) -> float:
    rho = np.abs(values) ** 2
    return float(dx * (rho.sum() - 0.5 * (rho[0] + rho[-1])))


@dataclass(frozen=True)
class TimeScheme:
    """Crank-Nicolson time stepping with ``n_steps`` steps of length ``dt``.

    ``mu2 = 4im/(hbar dt)`` is the complex energy of the stationary problem
    solved at every step; with hbar = 2m = 1 it equals ``2i/dt``.
    """

    n_steps: int
    dt: float
    mu2: complex = field(init=False)

    def __post_init__(self):
        if self.n_steps < 1:
            raise ValueError(f"n_steps must be positive, got {self.n_steps}")
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        hbar, mass = 1.0, 0.5
        mu2 = 4j * mass / (hbar * self.dt)
        assert mu2 == 2j / self.dt
        object.__setattr__(self, "mu2", mu2)

    @classmethod
    def from_scaled(cls, n_steps: int, total_scaled_time: float, sigma0: float) -> "TimeScheme":
        """Scheme covering ``total_scaled_time`` in units of ``t~ = 2t/sigma0**2``."""
        return cls(n_steps, scaled_to_time(total_scaled_time, sigma0) / n_steps)

    @property
    def total_time(self) -> float:
        return self.n_steps * self.dt

    @property
    def mu(self) -> complex:
        return principal_mu(self.mu2)

    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.n_steps + 1)


def principal_mu(mu2: complex) -> complex:
    """Square root of ``mu2`` in the first quadrant (shared by every module)."""
    mu = np.sqrt(complex(mu2))
    if mu.real < 0:
        mu = -mu
    return complex(mu)


@dataclass(frozen=True)
class WavePacketSpec:
    """Gaussian packet ``exp(i k (x-x0)) exp(-(x-x0)^2 / 2 sigma0^2)``.

    ``v`` is the group velocity in hbar = 2m = 1 units, so the carrier
    wavenumber is ``k = m v / hbar = v / 2``.
    """

    x0: float = 0.0
    sigma0: float = 0.2
    v: float = 0.0

    def __post_init__(self):
        if not self.sigma0 > 0:
            raise ValueError(f"sigma0 must be positive, got {self.sigma0}")

    @classmethod
    def from_scaled(cls, x0: float, sigma0: float, v_scaled: float) -> "WavePacketSpec":
        """Packet whose velocity is given in length per unit of ``t~``."""
        return cls(x0=x0, sigma0=sigma0, v=2.0 * v_scaled / sigma0**2)

    @property
    def k0(self) -> float:
        return self.v / 2.0

    @property
    def v_scaled(self) -> float:
        return self.v * self.sigma0**2 / 2.0

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        s = self.sigma0
        pref = 1.0 / (np.pi**0.25 * np.sqrt(s))
        return pref * np.exp(1j * self.k0 * (x - self.x0)) * np.exp(-((x - self.x0) ** 2) / (2 * s * s))


def boundary_leakage(values) -> float:
    """Largest end-point amplitude relative to the field maximum."""
    values = np.asarray(values)
    peak = np.max(np.abs(values))
    if peak == 0:
        return 0.0
    return float(max(abs(values[0]), abs(values[-1])) / peak)


def make_gaussian(grid: Grid1D, spec: WavePacketSpec) -> ComplexField:
    """Sample a Gaussian packet on ``grid``.

    Logs a warning when the packet is not numerically supported inside the
    grid: the boundary closure assumes the exterior starts empty.
    """
    values = spec(grid.points)
    leak = boundary_leakage(values)
    if leak > SUPPORT_TOL:
        logger.warning(
            "initial packet leaks outside [-%g, %g]: boundary amplitude %.2e of peak",
            grid.a, grid.a, leak,
        )
    return ComplexField(grid, values)


def analytic_free_density(spec: WavePacketSpec, x, t_scaled):
    """Exact free-evolution density of a Gaussian packet at scaled time ``t~``."""
    if np.any(np.asarray(t_scaled) < 0):
        raise ValueError("t_scaled must be non-negative")
    sigma = spec.sigma0 * np.sqrt(1.0 + np.asarray(t_scaled) ** 2)
    center = spec.x0 + spec.v_scaled * np.asarray(t_scaled)
    x = np.asarray(x, dtype=float)
    return np.exp(-((x - center) ** 2) / sigma**2) / (np.sqrt(np.pi) * sigma)


def analytic_free_packet(spec: WavePacketSpec, x, t):
    """Exact freely evolved Gaussian amplitude at physical time ``t``."""
    x = np.asarray(x, dtype=float)
    s2 = spec.sigma0**2
    z = 1.0 + 2j * t / s2
    k = spec.k0
    xc = x - spec.x0
    pref = 1.0 / (np.pi**0.25 * np.sqrt(spec.sigma0) * np.sqrt(z))
    return pref * np.exp((-(xc**2) / (2 * s2) + 1j * k * xc - 1j * k * k * t) / z)
