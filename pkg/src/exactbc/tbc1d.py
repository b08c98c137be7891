"""Crank-Nicolson stepping on ``[-a, a]`` closed by exact boundary conditions.

Each step solves ``(mu^2 - H) Psi_n = (mu^2 + H) Psi_{n-1}`` with the 3-point
Laplacian.  The rows at ``x = +-a`` need one ghost value outside the grid; the
boundary closure expresses it through the current boundary unknowns plus a
convolution over the stored boundary history, so the system stays
tridiagonal.

Two closures are available:

``"continuum"``
    The time-discrete, space-continuous relation
    ``Psi_n(a) = 1/mu^2 sum_p S_p [d_{n-p} + d_{n-p-1}]`` between boundary
    values and symmetric-difference outward derivatives ``d``.  In one
    dimension ``S_p`` reduces to ``-i mu C_{p/2}`` for even ``p``.
``"lattice"``
    The same construction with the free propagator of the discrete
    Laplacian.  Written for pair sums ``u^n = Psi^n + Psi^{n-1}`` it reads
    ``u^n_{J+1} = sum_m l_m u^{n-m}_J`` and reproduces the infinite-grid
    solution with an initially empty exterior to round-off.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from .grid import ComplexField, Grid1D, TimeScheme, boundary_leakage, SUPPORT_TOL, trapezoid_norm
from .kernel import KernelTable, lattice_ghost_kernel, origin_sums
from .observables import FluxLedger
from .potentials import NoPotential, eval_potential, is_static
from .tridiag import solve_tridiagonal

logger = logging.getLogger(__name__)

CLOSURES = ("continuum", "lattice")


@dataclass
class BoundaryHistory:
    """Boundary values, outward derivatives and ghost values, one entry per completed step."""

    side: str
    capacity: int
    values: np.ndarray = field(init=False, repr=False)
    derivs: np.ndarray = field(init=False, repr=False)
    ghosts: np.ndarray = field(init=False, repr=False)
    length: int = 0

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise ValueError(f"side must be 'left' or 'right', got {self.side!r}")
        self.values = np.zeros(self.capacity + 1, dtype=complex)
        self.derivs = np.zeros(self.capacity + 1, dtype=complex)
        self.ghosts = np.zeros(self.capacity + 1, dtype=complex)

    def append(self, value, deriv, ghost) -> None:
        if self.length > self.capacity:
            raise IndexError("boundary history is full")
        i = self.length
        self.values[i], self.derivs[i], self.ghosts[i] = value, deriv, ghost
        self.length += 1

    def pair_sums(self, upto: int) -> np.ndarray:
        """``d_m + d_{m-1}`` for ``m = 1 .. upto``."""
        d = self.derivs[: upto + 1]
        return d[1:] + d[:-1]


def boundary_closure(history: BoundaryHistory, sums: np.ndarray, mu2: complex, n: int):
    """Affine closure ``Psi_n = alpha * d_n + gamma`` at one boundary point.

    ``d_n`` is the outward symmetric derivative at step ``n``; ``gamma``
    collects the history.  Returns ``(alpha, gamma, n_products)``.
    """
    if n < 1 or history.length < n:
        raise ValueError(f"closure at step {n} needs {n} history entries, have {history.length}")
    alpha = sums[0] / mu2
    e = history.pair_sums(n - 1)
    # e[m-1] = d_m + d_{m-1}; pairs with S_p for m = n - p
    tail = complex(np.dot(sums[1:n], e[::-1])) if n > 1 else 0j
    gamma = (sums[0] * history.derivs[n - 1] + tail) / mu2
    return alpha, gamma, n - 1


# the two sides are mirror images; these are the same function with the outward normal built in
boundary_closure_right = boundary_closure
boundary_closure_left = boundary_closure


class TBCStepper:
    """Crank-Nicolson propagation of one field on ``grid`` with exact boundaries.

    Parameters
    ----------
    grid, scheme
        Spatial grid and time scheme.
    potential
        Any grid-representable potential spec; it must vanish near ``+-a``.
    psi0
        Initial field (array or :class:`ComplexField`), numerically supported
        inside the grid.
    closure
        ``"continuum"`` (default) or ``"lattice"``.
    kernel
        Optional shared :class:`KernelTable`; needed only for transverse shifts.
    k_transverse2
        Transverse momentum squared of a band-domain Fourier mode.
    check_support
        Warn when ``psi0`` does not vanish at the boundary.
    """

    def __init__(self, grid: Grid1D, scheme: TimeScheme, potential=None, psi0=None, *,
                 closure: str = "continuum", kernel: KernelTable | None = None,
                 k_transverse2: float = 0.0, check_support: bool = True):
        if closure not in CLOSURES:
            raise ValueError(f"closure must be one of {CLOSURES}, got {closure!r}")
        self.grid = grid
        self.scheme = scheme
        self.potential = NoPotential() if potential is None else potential
        self.closure = closure
        self.k_transverse2 = float(k_transverse2)
        self.mu2 = scheme.mu2
        self.x = grid.points
        self.dx = grid.dx

        if psi0 is None:
            raise ValueError("psi0 is required")
        psi0 = psi0.values if isinstance(psi0, ComplexField) else np.asarray(psi0, dtype=complex)
        if psi0.shape != (grid.nx,):
            raise ValueError(f"psi0 must have {grid.nx} samples")
        leak = boundary_leakage(psi0) if check_support else 0.0
        if leak > SUPPORT_TOL:
            logger.warning("initial state not supported inside the grid (boundary/peak = %.2e); "
                           "the closure assumes an empty exterior", leak)
        self.psi = psi0.copy()
        self.n = 0

        n_steps = scheme.n_steps
        if closure == "continuum":
            if self.k_transverse2 == 0.0:
                self.sums = origin_sums(scheme.mu, n_steps)
            else:
                if kernel is None:
                    kernel = KernelTable(self.mu2, n_steps, k_transverse2=(self.k_transverse2,))
                self.sums = kernel.boundary_sums(self.k_transverse2)
        else:
            self.sums = lattice_ghost_kernel(self.mu2, n_steps + 1, self.dx, self.k_transverse2)
        self.kernel = kernel

        self.left = BoundaryHistory("left", n_steps)
        self.right = BoundaryHistory("right", n_steps)
        # empty exterior: zero ghosts at t = 0
        dx2 = 2.0 * self.dx
        self.left.append(self.psi[0], -self.psi[1] / dx2, 0j)
        self.right.append(self.psi[-1], -self.psi[-2] / dx2, 0j)

        self.ledger = FluxLedger(self.mu2)
        self.ledger.start(trapezoid_norm(self.psi, self.dx))
        self.closure_ops = 0
        self._static_matrix = None

    @property
    def time(self) -> float:
        return self.n * self.scheme.dt

    def field(self) -> ComplexField:
        return ComplexField(self.grid, self.psi)

    def potential_at(self, t_mid: float) -> np.ndarray:
        return eval_potential(self.potential, self.x, t_mid) + self.k_transverse2

    def _interior_matrix(self, v):
        inv = 1.0 / self.dx**2
        diag = self.mu2 - v - 2.0 * inv
        lower = np.full(self.grid.nx, inv, dtype=complex)
        upper = np.full(self.grid.nx, inv, dtype=complex)
        return lower, diag.astype(complex), upper

    def _rhs(self, v):
        psi = self.psi
        inv = 1.0 / self.dx**2
        lap = np.empty_like(psi)
        lap[1:-1] = psi[2:] - 2.0 * psi[1:-1] + psi[:-2]
        lap[0] = psi[1] - 2.0 * psi[0] + self.left.ghosts[self.n]
        lap[-1] = self.right.ghosts[self.n] - 2.0 * psi[-1] + psi[-2]
        return self.mu2 * psi - inv * lap + v * psi

    def _closure_terms(self, history):
        """Return ``(diag_add, neighbour_add, rhs_add, coeffs)`` for one boundary row."""
        n = self.n + 1
        inv = 1.0 / self.dx**2
        if self.closure == "continuum":
            alpha, gamma, ops = boundary_closure(history, self.sums, self.mu2, n)
            self.closure_ops += ops
            k = 2.0 / (alpha * self.dx)
            return k, inv, k * gamma, (alpha, gamma)
        # g_n + g_{n-1} = sum_m l_m (Psi_J^{n-m} + Psi_J^{n-m-1})
        ell = self.sums
        u = history.values[1:n] + history.values[: n - 1]
        tail = complex(np.dot(ell[1:n], u[::-1])) if n > 1 else 0j
        h = ell[0] * history.values[n - 1] + tail - history.ghosts[n - 1]
        self.closure_ops += n - 1
        return ell[0] * inv, 0.0, -h * inv, (ell[0], h)

    def assemble(self):
        """Tridiagonal system ``(lower, diag, upper, rhs)`` for the next step, plus closure data."""
        if self.n >= self.scheme.n_steps:
            raise IndexError("time scheme exhausted")
        t_mid = (self.n + 0.5) * self.scheme.dt
        v = self.potential_at(t_mid)
        if is_static(self.potential) and self._static_matrix is not None:
            lower, diag, upper = (a.copy() for a in self._static_matrix)
        else:
            lower, diag, upper = self._interior_matrix(v)
            if is_static(self.potential):
                self._static_matrix = (lower.copy(), diag.copy(), upper.copy())
        rhs = self._rhs(v)
        inv = 1.0 / self.dx**2
        dl, nl, rl, cl = self._closure_terms(self.left)
        dr, nr, rr, cr = self._closure_terms(self.right)
        diag[0] += dl
        upper[0] += nl
        rhs[0] += rl
        diag[-1] += dr
        lower[-1] += nr
        rhs[-1] += rr
        lower[0] = 0.0
        upper[-1] = 0.0
        return (lower, diag, upper, rhs), (cl, cr)

    def _finish_side(self, history, coeffs, value, neighbour):
        dx2 = 2.0 * self.dx
        if self.closure == "continuum":
            alpha, gamma = coeffs
            deriv = (value - gamma) / alpha
            ghost = neighbour + dx2 * deriv
        else:
            ell0, h = coeffs
            ghost = ell0 * value + h
            deriv = (ghost - neighbour) / dx2
        history.append(value, deriv, ghost)

    def step(self) -> "TBCStepper":
        """Advance one time step in place and return ``self``."""
        (lower, diag, upper, rhs), (cl, cr) = self.assemble()
        new = solve_tridiagonal(lower, diag, upper, rhs)
        n = self.n
        self._finish_side(self.left, cl, new[0], new[1])
        self._finish_side(self.right, cr, new[-1], new[-2])
        self.psi = new
        self.n = n + 1
        self.ledger.record(
            trapezoid_norm(new, self.dx),
            (self.left.values[n + 1], self.left.values[n], self.left.derivs[n + 1], self.left.derivs[n]),
            (self.right.values[n + 1], self.right.values[n], self.right.derivs[n + 1], self.right.derivs[n]),
        )
        return self

    def run(self, n_steps: int | None = None, snapshot_every: int = 0) -> dict:
        """Step ``n_steps`` times (default: to the end of the scheme).

        Returns ``{step: field copy}`` for every ``snapshot_every``-th step
        (and the last one) when ``snapshot_every`` is positive.
        """
        n_steps = self.scheme.n_steps - self.n if n_steps is None else n_steps
        snaps = {}
        if snapshot_every and self.n % snapshot_every == 0:
            snaps[self.n] = self.psi.copy()
        for _ in range(n_steps):
            self.step()
            if snapshot_every and self.n % snapshot_every == 0:
                snaps[self.n] = self.psi.copy()
        if snapshot_every:
            snaps[self.n] = self.psi.copy()
        return snaps

    def closure_residual(self) -> float:
        """Largest mismatch of the boundary relation recomputed from the full histories."""
        n = self.n
        worst = 0.0
        for hist in (self.left, self.right):
            if self.closure == "continuum":
                e = hist.pair_sums(n)
                rhs = np.dot(self.sums[:n], e[::-1]) / self.mu2
                worst = max(worst, abs(hist.values[n] - rhs) / max(abs(hist.values[n]), 1e-300))
            else:
                u = hist.values[1:n + 1] + hist.values[:n]
                rhs = np.dot(self.sums[:n], u[::-1])
                g = hist.ghosts[n] + hist.ghosts[n - 1]
                worst = max(worst, abs(g - rhs) / max(abs(g), 1e-300))
        return float(worst)


def exterior_reconstruct(stepper: TBCStepper, x0: float, kernel: KernelTable | None = None) -> complex:
    """Wavefunction at ``|x0| > a`` from the boundary history of ``stepper``.

    Uses the continuum surface formula with both the derivative and the value
    term of the discrete Green identity.
    """
    a = stepper.grid.a
    if abs(x0) <= a:
        raise ValueError("x0 must lie outside the integration domain")
    hist = stepper.right if x0 > 0 else stepper.left
    d = abs(x0) - a
    n = stepper.n
    if n == 0:
        return 0j
    if kernel is None:
        kernel = KernelTable(stepper.mu2, stepper.scheme.n_steps, distances=(d,),
                             k_transverse2=(stepper.k_transverse2,))
    s = kernel.sums(d, stepper.k_transverse2)[:n]
    sd = kernel.sums(d, stepper.k_transverse2, derivative=True)[:n]
    e = hist.pair_sums(n)
    vals = hist.values[: n + 1]
    u = vals[1:] + vals[:-1]
    return complex((np.dot(s, e[::-1]) + np.dot(sd, u[::-1])) / (2.0 * stepper.mu2))


def surface_value(stepper: TBCStepper, side: str = "right") -> complex:
    """Boundary value given by the closure sum alone (the ``x0 -> a`` limit of the surface term)."""
    hist = stepper.right if side == "right" else stepper.left
    n = stepper.n
    s = origin_sums(stepper.scheme.mu, max(n, 1))[:n]
    return complex(np.dot(s, hist.pair_sums(n)[::-1]) / stepper.mu2)


def reflection_free_steps(grid: Grid1D, scheme: TimeScheme, k_max: float, factor: int = 8) -> int:
    """Steps before the fastest component can reach a wall ``factor*a`` away and return to ``[-a, a]``."""
    v_max = 2.0 * k_max
    travel = 2.0 * (factor - 1) * grid.a
    return min(scheme.n_steps, int(travel / (v_max * scheme.dt)))


def run_dirichlet(grid: Grid1D, scheme: TimeScheme, potential, psi0, n_steps: int, snapshot_every: int = 1):
    """Reference Crank-Nicolson run with ``Psi = 0`` at both grid ends.

    Uses LAPACK's banded solver so it shares no code with the stepper.
    Returns ``{step: field}``.
    """
    potential = NoPotential() if potential is None else potential
    x = grid.points
    psi = np.asarray(psi0, dtype=complex).copy()
    psi[0] = psi[-1] = 0.0
    mu2 = scheme.mu2
    inv = 1.0 / grid.dx**2
    m = grid.nx - 2
    snaps = {0: psi.copy()}
    ab = np.zeros((3, m), dtype=complex)
    ab[0, 1:] = inv
    ab[2, :-1] = inv
    for n in range(n_steps):
        v = eval_potential(potential, x[1:-1], (n + 0.5) * scheme.dt)
        ab[1] = mu2 - v - 2.0 * inv
        inner = psi[1:-1]
        lap = psi[2:] - 2.0 * inner + psi[:-2]
        rhs = mu2 * inner - inv * lap + v * inner
        psi = np.concatenate(([0j], solve_banded((1, 1), ab, rhs), [0j]))
        if snapshot_every and (n + 1) % snapshot_every == 0:
            snaps[n + 1] = psi.copy()
    snaps[n_steps] = psi.copy()
    return snaps
