"""Free evolution on the band ``[-a, a] x R`` by Fourier modes in ``y``.

For a ``y``-independent potential each transverse mode ``exp(i k_y y)`` obeys
a 1D problem with the energy shifted by ``k_y**2``; its boundary closure uses
kernels built for that shift.  The ``y`` direction is sampled on a finite
periodic window.  The set of mode momenta is centred on the packet's
transverse carrier so that a moving packet is resolved with few samples; the
sample values do not depend on that choice, only the per-mode energies do.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .grid import SUPPORT_TOL, Grid1D, TimeScheme, WavePacketSpec, analytic_free_density, boundary_leakage
from .kernel import KernelTable
from .tbc1d import TBCStepper

logger = logging.getLogger(__name__)

#: spectral power at the window's Nyquist edges, relative to the peak, above which sampling aliases
ALIASING_TOL = 1e-10


class AliasingError(ValueError):
    """Transverse spectrum not decayed at the Nyquist edge of the mode set."""


@dataclass(frozen=True)
class BandGrid:
    xgrid: Grid1D
    ny: int = 45
    y_min: float = 0.0
    y_max: float = 5.0
    carrier_ky: float = 0.0

    def __post_init__(self):
        if self.ny < 2:
            raise ValueError("ny must be >= 2")
        if not self.y_max > self.y_min:
            raise ValueError("empty y window")

    @property
    def length(self) -> float:
        return self.y_max - self.y_min

    @property
    def dy(self) -> float:
        return self.length / self.ny

    @property
    def y(self) -> np.ndarray:
        return self.y_min + self.dy * np.arange(self.ny)

    @property
    def mode_index(self) -> np.ndarray:
        """Integer wavenumber of each FFT bin, chosen in the window centred on the carrier."""
        centre = int(round(self.carrier_ky * self.length / (2 * np.pi)))
        i = np.arange(self.ny)
        return centre + (i - centre + self.ny // 2) % self.ny - self.ny // 2

    @property
    def k_y(self) -> np.ndarray:
        return 2 * np.pi * self.mode_index / self.length

    def points(self):
        return np.meshgrid(self.xgrid.points, self.y, indexing="ij")


def decompose(band: BandGrid, field2d) -> np.ndarray:
    """Mode amplitudes ``c[x, j]`` with ``field(x, y) = sum_j c[x, j] exp(i k_j (y - y_min))``."""
    field2d = np.asarray(field2d, dtype=complex)
    if field2d.shape != (band.xgrid.nx, band.ny):
        raise ValueError(f"expected shape {(band.xgrid.nx, band.ny)}, got {field2d.shape}")
    coeffs = np.fft.fft(field2d, axis=1) / band.ny
    edge = aliasing_level(band, coeffs)
    if edge > ALIASING_TOL:
        logger.warning("transverse spectrum at the Nyquist edge is %.1e of the peak; increase ny", edge)
    return coeffs


def recombine(band: BandGrid, coeffs) -> np.ndarray:
    return np.fft.ifft(np.asarray(coeffs) * band.ny, axis=1)


def aliasing_level(band: BandGrid, coeffs) -> float:
    """Power in the two outermost modes relative to the strongest mode."""
    power = np.sum(np.abs(coeffs) ** 2, axis=0)
    peak = power.max()
    if peak == 0:
        return 0.0
    m = band.mode_index
    edges = (m == m.min()) | (m == m.max())
    return float(power[edges].max() / peak)


@dataclass
class ModeSet:
    """One 1D stepper per transverse mode, sharing a kernel table."""

    band: BandGrid
    scheme: TimeScheme
    potential: object = None
    closure: str = "continuum"
    steppers: list = field(default_factory=list, repr=False)
    kernel: KernelTable | None = field(default=None, repr=False)

    @classmethod
    def from_field(cls, band, scheme, field2d, potential=None, closure="continuum") -> "ModeSet":
        coeffs = decompose(band, field2d)
        leak = boundary_leakage(np.abs(np.asarray(field2d)).max(axis=1))
        if leak > SUPPORT_TOL:
            logger.warning("initial field not supported inside the band (boundary/peak = %.2e)", leak)
        modes = cls(band, scheme, potential, closure)
        k2 = band.k_y**2
        if closure == "continuum":
            shifted = tuple(sorted({float(v) for v in k2 if v != 0.0}))
            modes.kernel = KernelTable(scheme.mu2, scheme.n_steps, k_transverse2=shifted or (0.0,))
        for j in range(band.ny):
            modes.steppers.append(TBCStepper(band.xgrid, scheme, potential, coeffs[:, j], closure=closure,
                                             kernel=modes.kernel, k_transverse2=float(k2[j]),
                                             check_support=False))
        return modes

    @property
    def n(self) -> int:
        return self.steppers[0].n

    def coefficients(self) -> np.ndarray:
        return np.column_stack([s.psi for s in self.steppers])

    def field(self) -> np.ndarray:
        return recombine(self.band, self.coefficients())

    def density(self) -> np.ndarray:
        return np.abs(self.field()) ** 2


def step_modes(modes: ModeSet) -> ModeSet:
    """Advance every mode one step; modes never interact."""
    for s in modes.steppers:
        s.step()
    return modes


def run_band(modes: ModeSet, snapshot_steps=()) -> dict:
    """Step to the end of the scheme; return ``{step: density}`` at the requested steps."""
    wanted = set(snapshot_steps)
    out = {}
    if modes.n in wanted:
        out[modes.n] = modes.density()
    while modes.n < modes.scheme.n_steps:
        step_modes(modes)
        if modes.n in wanted:
            out[modes.n] = modes.density()
    return out


def gaussian_2d(band: BandGrid, spec_x: WavePacketSpec, spec_y: WavePacketSpec) -> np.ndarray:
    """Product packet sampled on the band grid (no periodic images)."""
    return np.outer(spec_x(band.xgrid.points), spec_y(band.y))


def analytic_density_2d(band: BandGrid, spec_x: WavePacketSpec, spec_y: WavePacketSpec, t: float) -> np.ndarray:
    """Product of the two exact 1D free densities at physical time ``t``."""
    rx = analytic_free_density(spec_x, band.xgrid.points, 2.0 * t / spec_x.sigma0**2)
    ry = analytic_free_density(spec_y, band.y, 2.0 * t / spec_y.sigma0**2)
    return np.outer(rx, ry)


def peak_error(density, reference) -> float:
    """Relative deviation at the node where ``reference`` peaks."""
    i = np.unravel_index(np.argmax(reference), reference.shape)
    return float(abs(density[i] - reference[i]) / reference[i])


def write_density(path, band: BandGrid, density) -> None:
    """Header line ``nx ny x_min x_max y_min y_max``, then one x-row per line."""
    g = band.xgrid
    header = f"{g.nx} {band.ny} {-g.a!r} {g.a!r} {band.y_min!r} {band.y[-1]!r}"
    np.savetxt(path, np.asarray(density), header=header, fmt="%.12e")
