"""Command line interface.

Subcommands:

* ``simulate``  run the model, write the output table as CSV
* ``compare``   score a run against a measured trace
* ``power``     cooking-power curve and standardized figures
* ``calibrate`` fit chosen coefficients against a measured trace
* ``sweep``     simulate a cartesian parameter grid

Primary results go to stdout (or ``--out``); progress and status lines
go to stderr.  Exit codes: 0 success, 1 usage error, 2 bad data or
configuration, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import nullcontext
from pathlib import Path

from . import __version__
from .config import dump_config, load_config
from .dataio import (load_experimental_csv, write_power_csv,
                     write_residuals_csv, write_result_csv, write_sweep_csv)
from .fitting import ParamSpec, calibrate, get_param, sweep
from .metrics import (METHOD_INTERPOLATE, METHOD_REGRESSION,
                      cooking_power_series, relative_error,
                      standardized_cooking_power)
from .solver import SimulationResult, Status, integrate

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3


class _Parser(argparse.ArgumentParser):
    """argparse, but usage problems exit with code 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="solarcooker",
                     description="Thermal simulator for a CPC-type solar cooker.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add_common(p: argparse.ArgumentParser, *, experiment: bool = False) -> None:
        p.add_argument("-c", "--config", required=True,
                       help="run configuration JSON file")
        if experiment:
            p.add_argument("-e", "--experiment", required=True,
                           help="measured trace CSV (time_min,T_fluid_C[,err_C])")
        p.add_argument("-o", "--out", help="write the primary output here "
                                           "instead of stdout")
        p.add_argument("--plot", metavar="PATH",
                       help="also render a chart; .svg uses the built-in "
                            "writer, other extensions use matplotlib")

    p_sim = sub.add_parser("simulate", help="run the model and emit the output table")
    add_common(p_sim)

    p_cmp = sub.add_parser("compare", help="score a run against a measured trace")
    add_common(p_cmp, experiment=True)

    p_pow = sub.add_parser("power", help="cooking-power curve and standardized figures")
    add_common(p_pow)

    p_cal = sub.add_parser("calibrate", help="fit coefficients against a measured trace")
    add_common(p_cal, experiment=True)
    p_cal.add_argument("--free", required=True,
                       help="comma-separated parameter paths, e.g. "
                            "convection.h_abs_fluid,convection.h_abs_ambient")
    p_cal.add_argument("--bounds", required=True,
                       help="comma-separated lo:hi boxes, one per free parameter")
    p_cal.add_argument("--max-iter", type=int, default=500,
                       help="simplex iteration cap (default 500)")

    p_swp = sub.add_parser("sweep", help="simulate a cartesian parameter grid")
    add_common(p_swp)
    p_swp.add_argument("--grid", required=True,
                       help="comma-separated axes name:lo:hi:steps using dotted "
                            "parameter paths, e.g. "
                            "geometry.area_collector:0.8:1.6:5")
    p_swp.add_argument("--method", choices=[METHOD_INTERPOLATE, METHOD_REGRESSION],
                       default=METHOD_INTERPOLATE,
                       help="standardized-power method for the summary column")

    return parser


def _out_stream(args):
    if args.out:
        return open(args.out, "w", encoding="utf-8", newline="")
    return nullcontext(sys.stdout)


def _status_note(result: SimulationResult) -> str:
    if result.status is Status.BOILED:
        return f"boiling point reached at {result.t_boil / 60.0:.2f} min"
    if result.status is Status.STEP_FAILURE:
        return "step size underflow, trajectory truncated"
    last = result.samples[-1].state
    return (f"run ended at {last.time / 60.0:.1f} min with "
            f"T_fluid = {last.t_fluid - 273.15:.2f} C")


def _render_plot(path: str, kind: str, *, result=None, curve=None,
                 experiment=None, sweep_result=None, standardized=None) -> None:
    target = Path(path)
    if target.suffix.lower() == ".svg":
        from . import svgplot
        if kind == "temperature":
            text = svgplot.temperature_chart(result)
        elif kind == "power":
            text = svgplot.power_chart(curve)
        elif kind == "comparison":
            text = svgplot.comparison_chart(result, experiment)
        else:
            raise ValueError(f"no SVG renderer for {kind} charts; "
                             "use a matplotlib extension such as .png")
        target.write_text(text, encoding="utf-8")
    else:
        from . import figures
        if kind == "temperature":
            fig = figures.temperature_figure(result)
        elif kind == "power":
            fig = figures.power_figure(curve, standardized)
        elif kind == "comparison":
            fig = figures.comparison_figure(result, experiment)
        else:
            fig = figures.sweep_figure(sweep_result)
        figures.save_figure(fig, target)
    print(f"chart written to {path}", file=sys.stderr)


def _numerical_exit(result: SimulationResult) -> int:
    if result.status is Status.STEP_FAILURE:
        print("error: the integrator could not continue "
              "(step size underflow)", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def _cmd_simulate(args) -> int:
    params, env, cfg, initial = load_config(args.config)
    result = integrate(params, env, initial, cfg)
    print(_status_note(result), file=sys.stderr)
    with _out_stream(args) as stream:
        write_result_csv(result, stream)
    if args.plot:
        _render_plot(args.plot, "temperature", result=result)
    return _numerical_exit(result)


def _cmd_compare(args) -> int:
    params, env, cfg, initial = load_config(args.config)
    experiment = load_experimental_csv(args.experiment,
                                       t_ambient_ref=env.ambient(0.0))
    result = integrate(params, env, initial, cfg)
    print(_status_note(result), file=sys.stderr)
    if result.status is Status.STEP_FAILURE:
        return _numerical_exit(result)
    error = relative_error(result, experiment)
    print(f"relative error: {error:.2f}%")
    if args.out:
        with _out_stream(args) as stream:
            write_residuals_csv(result, experiment, stream)
        print(f"residuals written to {args.out}", file=sys.stderr)
    else:
        print("use --out to write the per-point residual CSV", file=sys.stderr)
    if args.plot:
        _render_plot(args.plot, "comparison", result=result, experiment=experiment)
    return EXIT_OK


def _cmd_power(args) -> int:
    params, env, cfg, initial = load_config(args.config)
    result = integrate(params, env, initial, cfg)
    print(_status_note(result), file=sys.stderr)
    if result.status is Status.STEP_FAILURE:
        return _numerical_exit(result)
    curve = cooking_power_series(result, params)

    standardized = None
    for method in (METHOD_INTERPOLATE, METHOD_REGRESSION):
        try:
            value = standardized_cooking_power(curve, method)
            print(f"standardized cooking power ({method}): {value:.3f} W")
            if standardized is None:
                standardized = value
        except ValueError as exc:
            print(f"standardized cooking power ({method}): unavailable ({exc})")

    with _out_stream(args) as stream:
        if stream is sys.stdout:
            print()
        write_power_csv(curve, stream)
    if args.plot:
        _render_plot(args.plot, "power", curve=curve, standardized=standardized)
    return EXIT_OK


def _parse_free_and_bounds(args, parser_error) -> list[ParamSpec]:
    names = [n.strip() for n in args.free.split(",") if n.strip()]
    bounds = [b.strip() for b in args.bounds.split(",") if b.strip()]
    if not names:
        parser_error("--free needs at least one parameter path")
    if len(names) != len(bounds):
        parser_error(f"--bounds has {len(bounds)} boxes for {len(names)} "
                     "free parameters")
    specs = []
    for name, box in zip(names, bounds):
        parts = box.split(":")
        if len(parts) != 2:
            parser_error(f"--bounds entry {box!r} is not lo:hi")
        try:
            lo, hi = float(parts[0]), float(parts[1])
        except ValueError:
            parser_error(f"--bounds entry {box!r} is not numeric")
        try:
            specs.append(ParamSpec(name=name, lower=lo, upper=hi))
        except ValueError as exc:
            parser_error(f"--bounds entry {box!r}: {exc}")
    return specs


def _cmd_calibrate(args, parser_error) -> int:
    specs = _parse_free_and_bounds(args, parser_error)
    params, env, cfg, initial = load_config(args.config)
    experiment = load_experimental_csv(args.experiment,
                                       t_ambient_ref=env.ambient(0.0))
    outcome = calibrate(params, env, initial, cfg, specs, experiment,
                        max_iter=args.max_iter)
    for spec in specs:
        print(f"{spec.name} = {get_param(outcome.params, spec.name):.6g}",
              file=sys.stderr)
    print(f"relative error {outcome.error:.3f}% after {outcome.iterations} "
          f"iterations ({outcome.evaluations} simulations)", file=sys.stderr)
    doc = dump_config(outcome.params, env, cfg, initial)
    with _out_stream(args) as stream:
        json.dump(doc, stream, indent=2)
        stream.write("\n")
    return EXIT_OK


def _parse_grid(args, parser_error) -> list[tuple[ParamSpec, int]]:
    grid = []
    for axis in args.grid.split(","):
        axis = axis.strip()
        if not axis:
            continue
        parts = axis.split(":")
        if len(parts) != 4:
            parser_error(f"--grid axis {axis!r} is not name:lo:hi:steps")
        name = parts[0]
        try:
            lo, hi = float(parts[1]), float(parts[2])
            steps = int(parts[3])
        except ValueError:
            parser_error(f"--grid axis {axis!r} has non-numeric bounds or steps")
        if steps < 1:
            parser_error(f"--grid axis {axis!r} needs steps >= 1")
        try:
            grid.append((ParamSpec(name=name, lower=lo, upper=hi), steps))
        except ValueError as exc:
            parser_error(f"--grid axis {axis!r}: {exc}")
    if not grid:
        parser_error("--grid needs at least one axis")
    return grid


def _cmd_sweep(args, parser_error) -> int:
    grid = _parse_grid(args, parser_error)
    params, env, cfg, initial = load_config(args.config)
    result = sweep(params, env, initial, cfg, grid, method=args.method)
    failures = sum(1 for row in result.rows if row.error is not None)
    print(f"swept {len(result.rows)} points ({failures} failed)", file=sys.stderr)
    with _out_stream(args) as stream:
        write_sweep_csv(result, stream)
    if args.plot:
        _render_plot(args.plot, "sweep", sweep_result=result)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    # ParamSpec construction inside argument parsing counts as usage.
    def parser_error(message: str) -> None:
        parser.error(message)

    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "compare":
            return _cmd_compare(args)
        if args.command == "power":
            return _cmd_power(args)
        if args.command == "calibrate":
            return _cmd_calibrate(args, parser_error)
        return _cmd_sweep(args, parser_error)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (OverflowError, FloatingPointError, ZeroDivisionError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
