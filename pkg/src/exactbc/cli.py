"""Command line entry point.

    exactbc run <scenario> [--key value]...
    exactbc validate <config-file>
    exactbc kernels --dump [--n-steps N] [--distances d1,d2] [--output FILE]

Exit status: 0 on success, 1 when a built-in check fails, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import dataclasses
import logging
import sys

from .grid import TimeScheme
from .kernel import KernelTable
from .scenarios import SCENARIOS, ConfigError, SimulationConfig, load_config, run, validate

_SKIP = {"scenario"}


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    for f in dataclasses.fields(SimulationConfig):
        if f.name in _SKIP:
            continue
        flag = "--" + f.name.replace("_", "-")
        if "bool" in f.type:
            parser.add_argument(flag, action="store_true", default=None)
        elif "int" in f.type:
            parser.add_argument(flag, type=int, default=None)
        elif "float" in f.type:
            parser.add_argument(flag, type=float, default=None)
        else:
            parser.add_argument(flag, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="exactbc", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a named scenario")
    p_run.add_argument("scenario", choices=SCENARIOS)
    p_run.add_argument("--config", help="key = value file applied before command-line flags")
    _add_config_flags(p_run)

    p_val = sub.add_parser("validate", help="check a configuration file without running it")
    p_val.add_argument("config")

    p_ker = sub.add_parser("kernels", help="tabulate C_q and kernel sums")
    p_ker.add_argument("--dump", action="store_true", required=True)
    p_ker.add_argument("--n-steps", type=int, default=40)
    p_ker.add_argument("--total-time", type=float, default=4.0, help="scaled time")
    p_ker.add_argument("--sigma0", type=float, default=0.2)
    p_ker.add_argument("--distances", default="0", help="comma-separated distances from the boundary")
    p_ker.add_argument("--output", default="-")
    return parser


def _cmd_run(args) -> int:
    base = load_config(args.config) if args.config else SimulationConfig()
    overrides = {f.name: getattr(args, f.name) for f in dataclasses.fields(SimulationConfig)
                 if f.name not in _SKIP and getattr(args, f.name, None) is not None}
    cfg = dataclasses.replace(base, scenario=args.scenario, **overrides)
    result = run(cfg)
    for name, (ok, value, tol) in result.checks.items():
        print(f"{name}: {'pass' if ok else 'FAIL'} ({value:.3e}, tolerance {tol:g})")
    print(f"wrote {len(result.files)} files to {result.config.output_dir}")
    if not result.passed:
        print("failed checks: " + ", ".join(result.failed()), file=sys.stderr)
        return 1
    return 0


def _cmd_validate(args) -> int:
    findings = validate(load_config(args.config))
    for f in findings:
        print(f"{f.level:7s} {f.name}: {f.message}")
    return 2 if any(f.level == "error" for f in findings) else 0


def _cmd_kernels(args) -> int:
    if args.n_steps < 1:
        raise ConfigError("n_steps must be positive")
    scheme = TimeScheme.from_scaled(args.n_steps, args.total_time, args.sigma0)
    distances = tuple(float(d) for d in args.distances.split(","))
    table = KernelTable(scheme.mu2, args.n_steps, distances=distances)
    table.dump(sys.stdout if args.output == "-" else args.output, distances)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    handlers = {"run": _cmd_run, "validate": _cmd_validate, "kernels": _cmd_kernels}
    try:
        return handlers[args.command](args)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"exactbc: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
