"""Command line interface.

Subcommands: ``simulate`` (one particle-system run, optional position
dump), ``exact`` (quantile table of the closed-form Burgers solution),
``strong`` and ``weak`` (Monte-Carlo convergence tables).  Study
parameters left unspecified fall back to desk-scale presets sized for
minutes of runtime; ``--full`` switches the presets to the full-scale
settings of the headline tables.

Exit codes: 0 on success, 2 on configuration errors, 3 on numerical
failures.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys

import numpy as np

from . import harness
from .engine import (FRACTIONAL_RANK, IID, OPTIMAL, RANK_COEFFICIENT, InitRule,
                     SimulationConfig, simulate)
from .errors import ConfigError, EmitError, NumericalError, RankflowError
from .exact import BurgersSolution
from .flux import parse_flux
from .initial import DiracAtZero, parse_distribution

_SCHEMES = {"rank": RANK_COEFFICIENT, "frac": FRACTIONAL_RANK}

# Desk-scale presets run each study in minutes on one core; the full-scale
# presets reproduce the headline tables.  Explicit flags always win.
_PRESETS = {
    ("strong", "n"): {
        "desk": dict(values=(250, 1000, 4000), step=0.002, runs=100),
        "full": dict(values=(250, 1000, 4000, 16000, 64000), step=0.002, runs=100),
    },
    ("strong", "h"): {
        "desk": dict(values=(0.5, 0.25, 0.125, 0.0625), particles=50_000, runs=100),
        "full": dict(values=tuple(0.5 ** k for k in range(1, 9)), particles=500_000,
                     runs=100),
    },
    ("weak", "n"): {
        "desk": dict(values=(100, 200, 400), step=0.002, runs=5000, batches=50),
        "full": dict(values=(100, 200, 400, 800, 1600, 3200), step=0.002,
                     runs=20_000, batches=100),
    },
    ("weak", "h"): {
        "desk": dict(values=(0.5, 0.25, 0.125, 0.0625), particles=20_000,
                     runs=1000, batches=20),
        "full": dict(values=tuple(0.5 ** k for k in range(1, 9)), particles=100_000,
                     runs=1000, batches=20),
    },
}


def _default_threads() -> int:
    raw = os.environ.get("RANKFLOW_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"RANKFLOW_THREADS must be an integer, got {raw!r}") from None


def _add_model_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--horizon", type=float, default=1.0, help="time horizon T")
    parser.add_argument("--sigma2", type=float, default=0.2,
                        help="diffusion parameter sigma^2")
    parser.add_argument("--flux", default="burgers",
                        help="burgers | quadratic | poly:c0,c1,...")
    parser.add_argument("--scheme", choices=sorted(_SCHEMES), default="rank",
                        help="drift from rank coefficients or from the speed at rank/N")
    parser.add_argument("--init", choices=["dirac", "optimal", "iid"], default="dirac",
                        help="particle placement rule")
    parser.add_argument("--dist", default="dirac0",
                        help="initial law: dirac0 | uniform:c,d | gauss:mu,sd")
    parser.add_argument("--seed", type=int, default=42, help="base seed (64-bit)")


def _add_study_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--sweep", required=True,
                        help="n[:v1,v2,...] or h[:v1,v2,...]; bare n/h uses the preset values")
    parser.add_argument("--particles", type=int, help="fixed N for an h-sweep")
    parser.add_argument("--step", type=float, help="fixed h for an n-sweep")
    parser.add_argument("--runs", type=int, help="number of Monte-Carlo runs R")
    parser.add_argument("--format", choices=["csv", "json"], default="csv")
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker processes (default: RANKFLOW_THREADS or 1)")
    parser.add_argument("--full", action="store_true",
                        help="use the full-scale presets instead of the desk-scale ones")
    parser.add_argument("--paired-seeds", action="store_true",
                        help="share run seeds across sweep values (common random numbers)")
    _add_model_flags(parser)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rankflow",
        description="Rank-based particle approximation of 1-D viscous conservation laws",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run the particle system once")
    sim.add_argument("--particles", type=int, required=True)
    sim.add_argument("--step", type=float, required=True)
    sim.add_argument("--emit-positions", metavar="PATH",
                     help="write the final positions as CSV (index,position)")
    _add_model_flags(sim)

    ex = sub.add_parser("exact", help="quantile table of the exact Burgers solution")
    ex.add_argument("--sigma2", type=float, default=0.2)
    ex.add_argument("--horizon", type=float, default=1.0)
    ex.add_argument("--grid", type=int, default=5000, help="number of quantile cells K")
    ex.add_argument("--out", help="output path (default: stdout)")

    strong = sub.add_parser("strong", help="strong (mean W1) convergence table")
    _add_study_flags(strong)

    weak = sub.add_parser("weak", help="weak (W1 of mean) convergence table")
    _add_study_flags(weak)
    weak.add_argument("--batches", type=int, help="number of batches B (divides runs)")
    weak.add_argument("--grid", type=int, default=5000, help="quantile cells K")

    return parser


def _make_init(args) -> InitRule:
    if args.init == "dirac":
        return InitRule(OPTIMAL, DiracAtZero())
    rule = OPTIMAL if args.init == "optimal" else IID
    return InitRule(rule, parse_distribution(args.dist))


def _sigma(args) -> float:
    if args.sigma2 <= 0.0:
        raise ConfigError("--sigma2 must be > 0")
    return float(np.sqrt(args.sigma2))


def _cmd_simulate(args) -> int:
    config = SimulationConfig(
        n_particles=args.particles,
        step=args.step,
        horizon=args.horizon,
        sigma=_sigma(args),
        flux=parse_flux(args.flux),
        scheme=_SCHEMES[args.scheme],
        init=_make_init(args),
        seed=args.seed,
    )
    final = simulate(config)
    if args.emit_positions:
        try:
            with open(args.emit_positions, "w", newline="", encoding="ascii") as handle:
                writer = csv.writer(handle)
                writer.writerow(["index", "position"])
                for i, value in enumerate(final.positions):
                    writer.writerow([i, f"{value:.17g}"])
        except OSError as err:
            raise EmitError(f"cannot write positions to {args.emit_positions}: {err}") from err
    pos = final.positions
    print(f"final time {final.time:g}: {pos.size} particles, "
          f"mean {pos.mean():.6g}, min {pos.min():.6g}, max {pos.max():.6g}")
    return 0


def _cmd_exact(args) -> int:
    if args.grid < 2:
        raise ConfigError("--grid must be >= 2")
    solution = BurgersSolution(float(np.sqrt(args.sigma2)))
    levels = np.arange(1, args.grid) / args.grid
    quantiles = solution.quantile(args.horizon, levels)
    lines = ["u,quantile"] + [f"{u:.8g},{q:.8g}" for u, q in zip(levels, quantiles)]
    text = "\n".join(lines) + "\n"
    if args.out and args.out != "-":
        try:
            with open(args.out, "w", encoding="ascii") as handle:
                handle.write(text)
        except OSError as err:
            raise EmitError(f"cannot write quantiles to {args.out}: {err}") from err
    else:
        sys.stdout.write(text)
    return 0


def _parse_sweep(text: str, preset: dict) -> tuple[str, tuple]:
    name, _, raw = text.partition(":")
    if name not in ("n", "h"):
        raise ConfigError(f"bad sweep spec {text!r} (want n:... or h:...)")
    if not raw:
        return name, preset["values"]
    try:
        values = tuple(int(v) for v in raw.split(",")) if name == "n" else \
            tuple(float(v) for v in raw.split(","))
    except ValueError as err:
        raise ConfigError(f"bad sweep values in {text!r}") from err
    return name, values


def _cmd_study(kind: str, args) -> int:
    sweep_name = args.sweep.partition(":")[0]
    if sweep_name not in ("n", "h"):
        raise ConfigError(f"bad sweep spec {args.sweep!r} (want n:... or h:...)")
    preset = _PRESETS[(kind, sweep_name)]["full" if args.full else "desk"]
    sweep, values = _parse_sweep(args.sweep, preset)

    if sweep == "n":
        step = args.step if args.step is not None else preset["step"]
        particles = int(max(values))  # overridden row by row
    else:
        step = float(min(values))  # overridden row by row
        particles = args.particles if args.particles is not None else preset["particles"]
    runs = args.runs if args.runs is not None else preset["runs"]

    base = SimulationConfig(
        n_particles=particles,
        step=step,
        horizon=args.horizon,
        sigma=_sigma(args),
        flux=parse_flux(args.flux),
        scheme=_SCHEMES[args.scheme],
        init=_make_init(args),
        seed=args.seed,
    )
    if kind == harness.STRONG:
        spec = harness.StudySpec(kind, base, sweep, values, runs,
                                 paired_seeds=args.paired_seeds)
    else:
        if args.batches is not None:
            batches = args.batches
        elif runs == preset["runs"]:
            batches = preset["batches"]
        else:
            batches = min(100, max(2, runs // 10))
        spec = harness.StudySpec(kind, base, sweep, values, runs, batches=batches,
                                 grid_k=args.grid, paired_seeds=args.paired_seeds)
    threads = args.threads if args.threads is not None else _default_threads()
    table = harness.run_study(spec, threads=threads)
    harness.emit(table, args.format, args.out)
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "exact":
            return _cmd_exact(args)
        return _cmd_study(args.command, args)
    except NumericalError as err:
        print(f"rankflow: numerical failure: {err}", file=sys.stderr)
        return 3
    except (ConfigError, EmitError) as err:
        print(f"rankflow: {err}", file=sys.stderr)
        return 2
    except RankflowError as err:
        print(f"rankflow: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
