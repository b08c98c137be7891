"""Interaction potentials.

Each variant is a small frozen dataclass; :func:`eval_potential` evaluates the
grid-representable ones.  The driven delta well cannot be sampled on a grid
and is handled by :mod:`exactbc.delta`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class NoPotential:
    static = True


@dataclass(frozen=True)
class StaticGaussian:
    """``V0 exp(-x^2/b^2)``."""

    V0: float
    b: float
    static = True

    def __post_init__(self):
        if not self.b > 0:
            raise ValueError("b must be positive")


@dataclass(frozen=True)
class DrivenGaussian:
    """``V0 (1 + sin(2 pi omega t~)) exp(-x^2/b^2)`` with ``t~ = t / tau``.

    ``tau`` converts physical time to the scaled time in which ``omega`` is
    quoted (``sigma0**2 / 2`` for the packet-based scaling).
    """

    V0: float
    b: float
    omega: float
    tau: float = 1.0
    static = False

    def __post_init__(self):
        if not self.b > 0:
            raise ValueError("b must be positive")
        if not self.tau > 0:
            raise ValueError("tau must be positive")


@dataclass(frozen=True)
class DoubleWell:
    """``V0 [exp(-(x-a0)^2/b^2) + exp(-(x+a0)^2/b^2)]``."""

    V0: float
    b: float
    a0: float
    static = True

    def __post_init__(self):
        if not self.b > 0:
            raise ValueError("b must be positive")


@dataclass(frozen=True)
class RegularizedDelta:
    """``-lambda(t) exp(-x^2/b^2) / (b sqrt(pi))``: a delta well of unit-normalized width ``b``.

    ``lambda(t) = lambda0 + (A/2)(1 - cos(drive_factor * omega0 * t))`` with
    ``omega0 = lambda0**2 / 4``, matching :class:`DrivenDelta`.
    """

    lambda0: float
    b: float
    amplitude: float = 0.0
    drive_factor: float = 0.7

    def __post_init__(self):
        if not self.b > 0:
            raise ValueError("b must be positive")

    @property
    def static(self):
        return self.amplitude == 0.0

    def strength(self, t):
        return DrivenDelta(self.lambda0, self.amplitude, self.drive_factor).strength(t)


@dataclass(frozen=True)
class DrivenDelta:
    """``-lambda(t) delta(x)`` with a pulsed strength.

    ``lambda(t) = lambda0 + (A/2)(1 - cos(drive_factor * omega0 * t))``.
    """

    lambda0: float
    amplitude: float = 0.0
    drive_factor: float = 0.7
    static = False

    def __post_init__(self):
        if not self.lambda0 > 0:
            raise ValueError("lambda0 must be positive")

    @property
    def omega0(self) -> float:
        return self.lambda0**2 / 4.0

    def strength(self, t):
        return self.lambda0 + 0.5 * self.amplitude * (1.0 - np.cos(self.drive_factor * self.omega0 * t))


PotentialSpec = NoPotential | StaticGaussian | DrivenGaussian | DoubleWell | RegularizedDelta | DrivenDelta


def eval_potential(spec, x, t_mid=0.0):
    """Evaluate ``V(x, t_mid)``; ``t_mid`` is the mid-step time of the CN step."""
    x = np.asarray(x, dtype=float)
    if isinstance(spec, NoPotential):
        return np.zeros_like(x)
    if isinstance(spec, StaticGaussian):
        return spec.V0 * np.exp(-(x**2) / spec.b**2)
    if isinstance(spec, DrivenGaussian):
        drive = 1.0 + np.sin(2.0 * np.pi * spec.omega * t_mid / spec.tau)
        return spec.V0 * drive * np.exp(-(x**2) / spec.b**2)
    if isinstance(spec, DoubleWell):
        return spec.V0 * (np.exp(-((x - spec.a0) ** 2) / spec.b**2) + np.exp(-((x + spec.a0) ** 2) / spec.b**2))
    if isinstance(spec, RegularizedDelta):
        lam = spec.strength(t_mid)
        return -lam * np.exp(-(x**2) / spec.b**2) / (spec.b * np.sqrt(np.pi))
    if isinstance(spec, DrivenDelta):
        raise TypeError("a delta potential cannot be sampled on a grid; use exactbc.delta")
    raise TypeError(f"unknown potential {spec!r}")


def is_static(spec) -> bool:
    return bool(spec.static)
