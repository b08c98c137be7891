"""Crank-Nicolson wave-packet propagation on a finite box with exact transparent boundaries."""
from .band2d import BandGrid, ModeSet, decompose, recombine, step_modes
from .delta import DeltaRun, autocorrelation, bound_phase, delta_offorigin, delta_recurrence_step, pulsed_run
from .grid import (ComplexField, Grid1D, TimeScheme, WavePacketSpec, analytic_free_density, make_gaussian,
                   principal_mu)
from .kernel import KernelTable, cq_coefficient, kernel_sum_origin, kernel_sums_dft
from .observables import FluxLedger, flux_increment, interior_norm, overlap_exterior_step
from .potentials import DoubleWell, DrivenDelta, DrivenGaussian, NoPotential, RegularizedDelta, StaticGaussian
from .scenarios import SCENARIOS, SimulationConfig, run, validate
from .tbc1d import BoundaryHistory, TBCStepper, boundary_closure, exterior_reconstruct

__version__ = "0.1.0"
