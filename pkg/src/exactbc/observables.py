"""Probability bookkeeping from boundary data.

The exterior probability (or the exterior part of an overlap) changes from
step ``n-1`` to ``n`` by a surface term that only needs the boundary values
and outward normal derivatives of the two fields::

    d<Phi|Psi>_ext = 1/(2 mu^2) [ U^* dW - dU^* W ],   U = Phi_n + Phi_{n-1}, W = Psi_n + Psi_{n-1}

With the symmetric-difference derivative and the trapezoidal interior norm
this balances the Crank-Nicolson interior update exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import trapezoid_norm

IMAG_TOL = 1e-12


def overlap_exterior_step(phi_n, phi_prev, dphi_n, dphi_prev, psi_n, psi_prev, dpsi_n, dpsi_prev, mu2) -> complex:
    """Increment of the exterior overlap ``<Phi|Psi>`` through one boundary point.

    Derivatives are outward normal derivatives.
    """
    u = phi_n + phi_prev
    du = dphi_n + dphi_prev
    w = psi_n + psi_prev
    dw = dpsi_n + dpsi_prev
    return (np.conj(u) * dw - np.conj(du) * w) / (2.0 * mu2)


def flux_increment(psi_n, psi_prev, dpsi_n, dpsi_prev, mu2) -> float:
    """Probability gained by the exterior region beyond one boundary point."""
    inc = overlap_exterior_step(psi_n, psi_prev, dpsi_n, dpsi_prev, psi_n, psi_prev, dpsi_n, dpsi_prev, mu2)
    scale = max(abs(psi_n) + abs(psi_prev), 1.0) * max(abs(dpsi_n) + abs(dpsi_prev), 1.0) / abs(mu2)
    if abs(inc.imag) > IMAG_TOL * scale:
        raise ArithmeticError(f"flux increment has imaginary part {inc.imag:.3e}")
    return float(inc.real)


def interior_norm(values, dx) -> float:
    """Trapezoidal norm of a sampled field."""
    return trapezoid_norm(values, dx)


@dataclass
class FluxLedger:
    """Interior norm and cumulative exterior probability per side, one row per step."""

    mu2: complex
    interior: list = field(default_factory=list)
    left_increments: list = field(default_factory=list)
    right_increments: list = field(default_factory=list)

    def start(self, norm0: float) -> None:
        self.interior = [norm0]
        self.left_increments = [0.0]
        self.right_increments = [0.0]

    def record(self, norm, left, right) -> None:
        """``left``/``right`` are ``(psi_n, psi_prev, d_n, d_prev)`` boundary tuples."""
        self.interior.append(norm)
        self.left_increments.append(flux_increment(*left, self.mu2))
        self.right_increments.append(flux_increment(*right, self.mu2))

    @property
    def left(self) -> np.ndarray:
        return np.cumsum(self.left_increments)

    @property
    def right(self) -> np.ndarray:
        return np.cumsum(self.right_increments)

    @property
    def total(self) -> np.ndarray:
        return np.asarray(self.interior) + self.left + self.right

    def conservation_error(self, reference: float = 1.0) -> float:
        """Largest ``|interior + exterior - reference|`` over the recorded steps."""
        return float(np.max(np.abs(self.total - reference)))

    def table(self, dt=1.0) -> np.ndarray:
        """Columns step, time, interior, left, right, total."""
        steps = np.arange(len(self.interior))
        return np.column_stack([steps, steps * dt, self.interior, self.left, self.right, self.total])
