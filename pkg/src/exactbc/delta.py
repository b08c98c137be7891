"""Exact discrete-time dynamics of a driven delta well ``V = -lambda(t) delta(x)``.

The state starts in the bound state ``Phi_0(x) = sqrt(lambda0/2) exp(-lambda0 |x|/2)``
of the undriven well.  Splitting ``Psi_n = Phi_n + chi_n`` with the stationary
part ``Phi_n = exp(-i n theta) Phi_0``, the perturbation is free on both sides
of the origin and is fixed by the history of its derivative jump there.  The
jump of the pair sum ``chi_m + chi_{m-1}`` is

    J_m = -lambda_m (chi_m + chi_{m-1})(0) - (lambda_m - lambda0) (Phi_m + Phi_{m-1})(0)

and the origin value follows from ``-2 i mu chi_n = -sum_q C_q J_{n-2q}``,
``q = 0 .. (n-1)//2``.  Only the ``q = 0`` term involves ``chi_n``, which gives
an explicit recurrence.

Each jump carries the strength of its own step, ``lambda_{n-2q}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import Grid1D, TimeScheme, principal_mu
from .kernel import KernelTable, cq_table
from .potentials import DrivenDelta, RegularizedDelta


def bound_phase(mu2: complex, omega0: float) -> complex:
    """Per-step factor ``exp(-i theta) = (mu2 - omega0) / (mu2 + omega0)``."""
    if omega0 < 0:
        raise ValueError("omega0 must be non-negative")
    return complex((mu2 - omega0) / (mu2 + omega0))


@dataclass
class DeltaRun:
    """Recurrence state for one drive history.

    ``lambda_n[m]`` is the strength between steps ``m-1`` and ``m`` (entry 0
    is unused).  ``chi`` and ``jump`` are filled by :meth:`run` or by repeated
    :func:`delta_recurrence_step` calls.
    """

    lambda0: float
    lambda_n: np.ndarray
    mu2: complex
    chi: np.ndarray = field(init=False, repr=False)
    jump: np.ndarray = field(init=False, repr=False)
    filled: int = field(init=False, default=0)

    def __post_init__(self):
        if not self.lambda0 > 0:
            raise ValueError("lambda0 must be positive")
        self.lambda_n = np.asarray(self.lambda_n, dtype=float)
        if self.lambda_n.ndim != 1 or self.lambda_n.size < 2:
            raise ValueError("lambda_n needs at least one step")
        self.lambda_n[0] = self.lambda0
        size = self.lambda_n.size
        self.chi = np.zeros(size, dtype=complex)
        self.jump = np.zeros(size, dtype=complex)
        self._cq = cq_table(size // 2 + 1)
        u = self.phi_origin(np.arange(size))
        self._phi_pair = np.zeros(size, dtype=complex)
        self._phi_pair[1:] = u[1:] + u[:-1]

    @classmethod
    def from_drive(cls, spec: DrivenDelta, scheme: TimeScheme) -> "DeltaRun":
        """Sample the drive at mid-step times, like the grid stepper does."""
        t_mid = (np.arange(scheme.n_steps + 1) - 0.5) * scheme.dt
        return cls(spec.lambda0, spec.strength(t_mid), scheme.mu2)

    @property
    def n_steps(self) -> int:
        return self.lambda_n.size - 1

    @property
    def mu(self) -> complex:
        return principal_mu(self.mu2)

    @property
    def omega0(self) -> float:
        return self.lambda0**2 / 4.0

    @property
    def phase(self) -> complex:
        return bound_phase(self.mu2, self.omega0)

    @property
    def theta(self) -> float:
        return float(-np.angle(self.phase))

    @property
    def phi0_at_origin(self) -> float:
        return float(np.sqrt(self.lambda0 / 2.0))

    def phi_origin(self, n):
        return self.phase ** np.asarray(n) * self.phi0_at_origin

    def run(self) -> "DeltaRun":
        for n in range(self.filled + 1, self.n_steps + 1):
            delta_recurrence_step(self, n)
        return self

    def psi_origin(self) -> np.ndarray:
        n = np.arange(self.filled + 1)
        return self.phi_origin(n) + self.chi[: self.filled + 1]

    def series(self) -> np.ndarray:
        """Columns: step, ``|chi_n(0)|^2``, ``|Psi_n(0)|^2 / |Psi_0(0)|^2``, ``|<Phi_n|Psi_n>|^2``."""
        n = np.arange(self.filled + 1)
        origin = np.abs(self.psi_origin()) ** 2 / self.phi0_at_origin**2
        auto = np.abs(autocorrelation_series(self)) ** 2
        return np.column_stack([n, np.abs(self.chi[n]) ** 2, origin, auto])

    def write_series(self, path) -> None:
        np.savetxt(path, self.series(), fmt=["%d", "%.12e", "%.12e", "%.12e"],
                   header="step |chi(0)|^2 |Psi(0)|^2/|Psi_0(0)|^2 |<Phi|Psi>|^2")


def pulsed_run(lambda0: float, amplitude: float, n_steps: int = 1000, n_pulses: int = 40,
               drive_factor: float = 0.7) -> DeltaRun:
    """Drive of ``n_pulses`` periods of ``drive_factor * omega0`` spread over ``n_steps``."""
    spec = DrivenDelta(lambda0, amplitude, drive_factor)
    total = n_pulses * 2.0 * np.pi / (drive_factor * spec.omega0)
    return DeltaRun.from_drive(spec, TimeScheme(n_steps, total / n_steps))


def delta_recurrence_step(run: DeltaRun, n: int) -> complex:
    """Compute ``chi_n(0)`` and the derivative jump ``J_n`` from the stored history."""
    if n != run.filled + 1:
        raise ValueError(f"step {n} requested but history holds {run.filled} steps")
    lam = run.lambda_n
    m = n - 2 * np.arange(1, (n - 1) // 2 + 1)
    # -2 i mu chi_n = -J_n - sum_{q>=1} C_q J_{n-2q}
    tail = complex(np.dot(run._cq[1: m.size + 1], run.jump[m]))
    drive = (lam[n] - run.lambda0) * run._phi_pair[n]
    # J_n = -lam_n (chi_n + chi_{n-1}) - drive
    chi = (lam[n] * run.chi[n - 1] + drive - tail) / (-2j * run.mu - lam[n])
    run.chi[n] = chi
    run.jump[n] = -lam[n] * (chi + run.chi[n - 1]) - drive
    run.filled = n
    return chi


def autocorrelation_series(run: DeltaRun) -> np.ndarray:
    """``<Phi_n | Psi_n>`` for every computed step.

    The overlap of the free parts changes only through the origin, where the
    increment is ``conj(U_m) (J_m + lambda0 W_m) / (2 mu^2)`` with the pair sums
    ``U = Phi_m + Phi_{m-1}``, ``W = chi_m + chi_{m-1}`` at ``x = 0``.
    """
    n = run.filled
    u = run._phi_pair[1: n + 1]
    w = run.chi[1: n + 1] + run.chi[:n]
    inc = np.conj(u) * (run.jump[1: n + 1] + run.lambda0 * w) / (2.0 * run.mu2)
    return np.concatenate(([1.0 + 0j], 1.0 + np.cumsum(inc)))


def autocorrelation(run: DeltaRun, n: int) -> complex:
    if not 0 <= n <= run.filled:
        raise IndexError(f"step {n} not computed (have {run.filled})")
    return complex(autocorrelation_series(run)[n])


def delta_offorigin(run: DeltaRun, x: float, n: int, kernel: KernelTable | None = None) -> complex:
    """``Psi_n(x)`` away from the origin from the jump history.

    ``chi_n(x) = 1/(2 mu^2) sum_p S_p(|x|) J_{n-p}``.
    """
    if not 0 <= n <= run.filled:
        raise IndexError(f"step {n} not computed (have {run.filled})")
    phi = run.phi_origin(n) * np.exp(-0.5 * run.lambda0 * abs(x))
    if n == 0:
        return complex(phi)
    if kernel is None:
        kernel = KernelTable(run.mu2, run.n_steps, distances=(abs(x),))
    s = kernel.sums(abs(x))[:n]
    chi = np.dot(s, run.jump[n:0:-1]) / (2.0 * run.mu2)
    return complex(phi + chi)


def regularized_delta_oracle(run: DeltaRun, spec: DrivenDelta, b: float, a: float = 20.0,
                             points_per_width: int = 8, closure: str = "continuum"):
    """Same drive on a grid with the well smeared to a Gaussian of width ``b``.

    Returns ``(origin_density, autocorrelation)`` arrays over all steps, with
    the density normalized to the initial origin value.
    """
    from .tbc1d import TBCStepper

    half = int(round(a * points_per_width / b))
    grid = Grid1D(2 * half + 1, a=half * b / points_per_width)
    dt = (2j / run.mu2).real
    scheme = TimeScheme(run.n_steps, dt)
    x = grid.points
    phi0 = np.sqrt(run.lambda0 / 2.0) * np.exp(-0.5 * run.lambda0 * np.abs(x))
    pot = RegularizedDelta(spec.lambda0, b, spec.amplitude, spec.drive_factor)
    stepper = TBCStepper(grid, scheme, pot, phi0.astype(complex), closure=closure)
    weights = np.full(grid.nx, grid.dx)
    weights[[0, -1]] *= 0.5
    origin = np.empty(run.n_steps + 1)
    auto = np.empty(run.n_steps + 1, dtype=complex)
    origin[0] = 1.0
    auto[0] = np.sum(weights * phi0 * phi0)
    for n in range(1, run.n_steps + 1):
        stepper.step()
        origin[n] = abs(stepper.psi[half]) ** 2 / phi0[half] ** 2
        auto[n] = np.sum(weights * np.conj(run.phi_origin(n) / phi0[half] * phi0) * stepper.psi)
    return origin, auto
