"""Named simulation scenarios, their configuration and the files they write.

A scenario resolves a flat :class:`SimulationConfig`, runs the matching
solver, evaluates built-in checks and writes plain-text outputs:

* ``snapshot_<step>.dat``: ``x  Re(Psi)  Im(Psi)  |Psi|^2`` (1D grids)
* ``ledger.dat``: interior norm and cumulative exterior probabilities
* ``density_<step>.dat``: 2D density, one x-row per line
* ``delta_series.dat``: origin density and autocorrelation of the delta well
* ``manifest.txt``: every resolved parameter, derived quantities, checks

Outputs contain no timestamps, so identical configurations give identical files.
"""
from __future__ import annotations

import configparser
import dataclasses
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .band2d import (ALIASING_TOL, BandGrid, ModeSet, aliasing_level, analytic_density_2d, decompose,
                     gaussian_2d, peak_error, run_band, write_density)
from .delta import pulsed_run
from .grid import (SUPPORT_TOL, Grid1D, TimeScheme, WavePacketSpec, analytic_free_density, boundary_leakage,
                   scaled_to_time)
from .kernel import default_dft_size, default_eta
from .potentials import DoubleWell, DrivenGaussian, NoPotential, StaticGaussian
from .tbc1d import CLOSURES, TBCStepper, reflection_free_steps, run_dirichlet

logger = logging.getLogger(__name__)

SCENARIOS = ("free-1d", "scatter-static", "driven-trap", "tunneling", "driven-delta", "free-2d")
GRID_1D = SCENARIOS[:4]


class ConfigError(ValueError):
    """Invalid scenario or parameter combination."""


@dataclass
class SimulationConfig:
    """Flat parameter set; ``None`` fields take the scenario default.

    Velocities are in length per unit of scaled time ``t~ = 2t/sigma0**2``
    and ``total_time`` is a scaled time as well.
    """

    scenario: str = "free-1d"
    nx: int | None = None
    ny: int | None = None
    n_steps: int | None = None
    total_time: float | None = None
    sigma0: float | None = None
    x0: float | None = None
    v: float | None = None
    y0: float | None = None
    vy_ratio: float | None = None
    y_min: float | None = None
    y_max: float | None = None
    V0: float | None = None
    b: float | None = None
    omega: float | None = None
    a0: float | None = None
    lambda0: float | None = None
    amplitude: float | None = None
    drive_factor: float | None = None
    n_pulses: int | None = None
    closure: str = "lattice"
    snapshot_every: int | None = None
    output_dir: str = "out"
    conservation_tol: float = 1e-5
    oracle: bool = False
    oracle_tol: float = 1e-6
    oracle_factor: int = 8

    def resolved(self) -> "SimulationConfig":
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}; choose from {', '.join(SCENARIOS)}")
        values = dict(DEFAULTS[self.scenario])
        values.update({k: v for k, v in dataclasses.asdict(self).items() if v is not None})
        cfg = SimulationConfig(**values)
        cfg.check()
        return cfg

    def check(self) -> None:
        if self.n_steps is None or self.n_steps < 1:
            raise ConfigError(f"n_steps must be a positive integer, got {self.n_steps}")
        if self.closure not in CLOSURES:
            raise ConfigError(f"closure must be one of {CLOSURES}")
        if self.scenario != "driven-delta":
            if self.nx is None or self.nx < 3:
                raise ConfigError(f"nx must be >= 3, got {self.nx}")
            if not self.sigma0 or self.sigma0 <= 0:
                raise ConfigError("sigma0 must be positive")
            if not self.total_time or self.total_time <= 0:
                raise ConfigError("total_time must be positive")
        else:
            if not self.lambda0 or self.lambda0 <= 0:
                raise ConfigError("lambda0 must be positive")
            if self.oracle:
                raise ConfigError("--oracle applies to the grid scenarios only")
        if self.scenario == "free-2d" and (self.ny is None or self.ny < 2):
            raise ConfigError("ny must be >= 2")
        if self.oracle and self.scenario == "free-2d":
            raise ConfigError("--oracle applies to the 1D grid scenarios only")
        if self.snapshot_every is not None and self.snapshot_every < 0:
            raise ConfigError("snapshot_every must be non-negative")


DEFAULTS = {
    "free-1d": dict(nx=201, n_steps=40, total_time=4.0, sigma0=0.2, x0=0.0, v=0.25, snapshot_every=4),
    "scatter-static": dict(nx=401, n_steps=300, total_time=6.0, sigma0=0.15, x0=-0.3, v=0.37,
                           V0=-150.0, b=0.05, snapshot_every=30),
    "driven-trap": dict(nx=800, n_steps=800, total_time=80.0, sigma0=0.1, x0=0.0, v=0.0,
                        V0=-200.0, b=0.05, omega=0.05, snapshot_every=80),
    "tunneling": dict(nx=401, n_steps=1000, total_time=100.0, sigma0=0.12, x0=0.0, v=0.0,
                      V0=150.0, b=0.05, a0=0.5, snapshot_every=100),
    "driven-delta": dict(n_steps=1000, lambda0=2.0, amplitude=4.0, drive_factor=0.7, n_pulses=40,
                         snapshot_every=0),
    "free-2d": dict(nx=101, ny=45, n_steps=100, total_time=4.0, sigma0=0.2, x0=0.0, y0=1.0, v=0.25,
                    vy_ratio=1.5, y_min=0.0, y_max=5.0, snapshot_every=0),
}


def _coerce(name: str, text: str):
    kind = {f.name: f.type for f in dataclasses.fields(SimulationConfig)}[name]
    if "bool" in kind:
        low = text.strip().lower()
        if low not in ("1", "0", "true", "false", "yes", "no", "on", "off"):
            raise ConfigError(f"{name}: expected a boolean, got {text!r}")
        return low in ("1", "true", "yes", "on")
    if "int" in kind:
        return int(text)
    if "float" in kind:
        return float(text)
    return text.strip()


def load_config(path) -> SimulationConfig:
    """Read ``key = value`` lines (``#`` comments allowed, no sections)."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    parser.optionxform = str
    parser.read_string("[config]\n" + Path(path).read_text())
    known = {f.name for f in dataclasses.fields(SimulationConfig)}
    values = {}
    for key, text in parser["config"].items():
        name = key.replace("-", "_")
        if name not in known:
            raise ConfigError(f"unknown configuration key {key!r}")
        try:
            values[name] = _coerce(name, text)
        except ValueError as exc:
            raise ConfigError(f"{key}: {exc}") from exc
    return SimulationConfig(**values)


# ---------------------------------------------------------------- validation

@dataclass
class Finding:
    name: str
    level: str  # "ok", "warning" or "error"
    message: str


def _packet_x(cfg) -> WavePacketSpec:
    return WavePacketSpec.from_scaled(cfg.x0, cfg.sigma0, cfg.v)


def _packet_y(cfg) -> WavePacketSpec:
    return WavePacketSpec.from_scaled(cfg.y0, cfg.sigma0, cfg.v * cfg.vy_ratio)


def _band(cfg) -> BandGrid:
    return BandGrid(Grid1D(cfg.nx), cfg.ny, cfg.y_min, cfg.y_max, carrier_ky=_packet_y(cfg).k0)


def validate(config: SimulationConfig) -> list[Finding]:
    """Static checks of a configuration: support inside the box, transverse Nyquist, kernel damping."""
    try:
        cfg = config.resolved()
    except ConfigError as exc:
        return [Finding("parameters", "error", str(exc))]
    out = [Finding("parameters", "ok", f"scenario {cfg.scenario} resolved")]
    dft = default_dft_size(cfg.n_steps)
    damping = float(np.exp(-dft * default_eta(dft)))
    out.append(Finding("damping", "ok" if damping <= 1e-8 else "error",
                       f"exp(-N eta) = {damping:.1e} with N = {dft}"))
    if cfg.scenario == "driven-delta":
        return out
    grid = Grid1D(cfg.nx)
    leak = boundary_leakage(_packet_x(cfg)(grid.points))
    out.append(Finding("support", "ok" if leak <= SUPPORT_TOL else "warning",
                       f"boundary amplitude {leak:.1e} of peak (limit {SUPPORT_TOL:g})"))
    if cfg.scenario == "free-2d":
        band = _band(cfg)
        level = aliasing_level(band, np.fft.fft(gaussian_2d(band, _packet_x(cfg), _packet_y(cfg)), axis=1))
        out.append(Finding("nyquist", "ok" if level <= ALIASING_TOL else "error",
                           f"edge power {level:.1e} of peak (limit {ALIASING_TOL:g}) with ny = {cfg.ny}"))
        spy = _packet_y(cfg)
        sigma = spy.sigma0 * np.sqrt(1 + cfg.total_time**2)
        centre = spy.x0 + spy.v_scaled * cfg.total_time
        inside = cfg.y_min <= centre - 3 * sigma and centre + 3 * sigma <= cfg.y_max
        out.append(Finding("window", "ok" if inside else "warning",
                           f"final packet centre {centre:.3g} +- 3 sigma = {3 * sigma:.3g} in [{cfg.y_min}, {cfg.y_max}]"))
    return out


# ---------------------------------------------------------------- running

@dataclass
class RunResult:
    config: SimulationConfig
    checks: dict = field(default_factory=dict)  # name -> (passed, value, tolerance)
    metrics: dict = field(default_factory=dict)
    derived: dict = field(default_factory=dict)
    files: list = field(default_factory=list)
    data: dict = field(default_factory=dict, repr=False)

    @property
    def passed(self) -> bool:
        return all(ok for ok, _, _ in self.checks.values())

    def failed(self) -> list[str]:
        return [name for name, (ok, _, _) in self.checks.items() if not ok]


def grid_potential(cfg: SimulationConfig):
    if cfg.scenario in ("free-1d", "free-2d"):
        return NoPotential()
    if cfg.scenario == "scatter-static":
        return StaticGaussian(cfg.V0, cfg.b)
    if cfg.scenario == "driven-trap":
        # omega is quoted per unit of scaled time
        return DrivenGaussian(cfg.V0, cfg.b, cfg.omega, tau=scaled_to_time(1.0, cfg.sigma0))
    if cfg.scenario == "tunneling":
        return DoubleWell(cfg.V0, cfg.b, cfg.a0)
    raise ConfigError(f"scenario {cfg.scenario!r} has no grid potential")


def build_stepper(cfg: SimulationConfig) -> TBCStepper:
    grid = Grid1D(cfg.nx)
    scheme = TimeScheme.from_scaled(cfg.n_steps, cfg.total_time, cfg.sigma0)
    psi0 = _packet_x(cfg)(grid.points)
    return TBCStepper(grid, scheme, grid_potential(cfg), psi0, closure=cfg.closure)


def _write_snapshot(path, x, psi):
    np.savetxt(path, np.column_stack([x, psi.real, psi.imag, np.abs(psi) ** 2]),
               header="x Re(Psi) Im(Psi) |Psi|^2", fmt="%.12e")


def _write_ledger(path, table):
    np.savetxt(path, table, header="step time interior left right total",
               fmt=["%d"] + ["%.12e"] * 5)


def _run_1d(cfg: SimulationConfig, out: Path, result: RunResult) -> None:
    stepper = build_stepper(cfg)
    scheme = stepper.scheme
    result.derived.update(dx=stepper.dx, dt=scheme.dt, mu2=scheme.mu2)
    snaps = stepper.run(snapshot_every=cfg.snapshot_every or scheme.n_steps)
    for n, psi in sorted(snaps.items()):
        path = out / f"snapshot_{n}.dat"
        _write_snapshot(path, stepper.x, psi)
        result.files.append(path.name)
    ledger = stepper.ledger
    _write_ledger(out / "ledger.dat", ledger.table(scheme.dt))
    result.files.append("ledger.dat")
    err = ledger.conservation_error(ledger.interior[0])
    result.checks["conservation"] = (err <= cfg.conservation_tol, err, cfg.conservation_tol)
    result.metrics.update(left=float(ledger.left[-1]), right=float(ledger.right[-1]),
                          interior=float(ledger.interior[-1]), closure_ops=stepper.closure_ops)
    if cfg.scenario == "free-1d":
        t_s = cfg.total_time
        rho = analytic_free_density(_packet_x(cfg), stepper.x, t_s)
        result.metrics["analytic_deviation"] = float(np.max(np.abs(np.abs(stepper.psi) ** 2 - rho)) / rho.max())
    result.data.update(stepper=stepper, snapshots=snaps)
    if cfg.oracle:
        dev, window = oracle_deviation(cfg)
        result.checks["oracle"] = (dev <= cfg.oracle_tol, dev, cfg.oracle_tol)
        result.metrics["oracle_window"] = window


def oracle_deviation(cfg: SimulationConfig) -> tuple[float, int]:
    """Worst relative L2 gap to a wide zero-Dirichlet run over the reflection-free window."""
    stepper = build_stepper(cfg)
    grid, scheme = stepper.grid, stepper.scheme
    k_max = abs(_packet_x(cfg).k0) + 8.0 / cfg.sigma0
    window = reflection_free_steps(grid, scheme, k_max, cfg.oracle_factor)
    wide, offset = grid.widened(cfg.oracle_factor)
    start = np.zeros(wide.nx, dtype=complex)
    start[offset: offset + grid.nx] = stepper.psi
    ref = run_dirichlet(wide, scheme, stepper.potential, start, window)
    worst = 0.0
    for n in range(1, window + 1):
        stepper.step()
        r = ref[n][offset: offset + grid.nx]
        worst = max(worst, float(np.linalg.norm(stepper.psi - r) / np.linalg.norm(r)))
    return worst, window


def _run_delta(cfg: SimulationConfig, out: Path, result: RunResult) -> None:
    run = pulsed_run(cfg.lambda0, cfg.amplitude, cfg.n_steps, cfg.n_pulses, cfg.drive_factor).run()
    result.derived.update(dt=(2j / run.mu2).real, mu2=run.mu2, omega0=run.omega0, theta=run.theta)
    run.write_series(out / "delta_series.dat")
    result.files.append("delta_series.dat")
    series = run.series()
    excess = float(max(series[:, 3].max() - 1.0, 0.0))
    result.checks["autocorrelation_bound"] = (excess <= 1e-9, excess, 1e-9)
    result.metrics.update(final_origin_density=float(series[-1, 2]), final_autocorrelation=float(series[-1, 3]))
    result.data.update(run=run, series=series)


def _run_2d(cfg: SimulationConfig, out: Path, result: RunResult) -> None:
    band = _band(cfg)
    scheme = TimeScheme.from_scaled(cfg.n_steps, cfg.total_time, cfg.sigma0)
    spx, spy = _packet_x(cfg), _packet_y(cfg)
    f0 = gaussian_2d(band, spx, spy)
    level = aliasing_level(band, decompose(band, f0))
    result.checks["nyquist"] = (level <= ALIASING_TOL, level, ALIASING_TOL)
    modes = ModeSet.from_field(band, scheme, f0, closure=cfg.closure)
    if cfg.snapshot_every:
        steps = list(range(0, cfg.n_steps + 1, cfg.snapshot_every))
    else:
        steps = [0] + [int(round(j * cfg.n_steps / 6)) for j in range(1, 7)]
    snaps = run_band(modes, steps)
    errors = {}
    for n, rho in sorted(snaps.items()):
        path = out / f"density_{n}.dat"
        write_density(path, band, rho)
        result.files.append(path.name)
        if n:
            errors[n] = peak_error(rho, analytic_density_2d(band, spx, spy, n * scheme.dt))
    worst = max(s.ledger.conservation_error(s.ledger.interior[0]) / max(s.ledger.interior[0], 1e-300)
                for s in modes.steppers if s.ledger.interior[0] > 1e-300)
    result.checks["conservation"] = (worst <= cfg.conservation_tol, worst, cfg.conservation_tol)
    result.metrics["peak_error"] = errors
    result.derived.update(dx=band.xgrid.dx, dy=band.dy, dt=scheme.dt, mu2=scheme.mu2)
    result.data.update(modes=modes, snapshots=snaps, band=band, peak_errors=errors)


def run(config: SimulationConfig, write: bool = True) -> RunResult:
    """Run one scenario, write its files under ``output_dir`` and return checks and metrics."""
    cfg = config.resolved()
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    result = RunResult(cfg)
    if cfg.scenario in GRID_1D:
        _run_1d(cfg, out, result)
    elif cfg.scenario == "driven-delta":
        _run_delta(cfg, out, result)
    else:
        _run_2d(cfg, out, result)
    if write:
        write_manifest(out / "manifest.txt", result)
        result.files.append("manifest.txt")
    return result


def write_manifest(path, result: RunResult) -> None:
    lines = ["# resolved parameters"]
    for key, value in dataclasses.asdict(result.config).items():
        lines.append(f"{key} = {value}")
    lines.append("# derived")
    for key, value in result.derived.items():
        lines.append(f"{key} = {value!r}")
    lines.append("# metrics")
    for key, value in result.metrics.items():
        if isinstance(value, dict):
            value = " ".join(f"{k}:{v:.6e}" for k, v in value.items())
        lines.append(f"{key} = {value}")
    lines.append("# checks")
    for name, (ok, value, tol) in result.checks.items():
        lines.append(f"{name} = {'pass' if ok else 'FAIL'} value={value:.3e} tolerance={tol:g}")
    lines.append("# files")
    lines.extend(sorted(result.files))
    Path(path).write_text("\n".join(lines) + "\n")
