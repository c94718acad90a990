"""Delimited-text input and output.

Experimental traces come in as CSV with the header
``time_min,T_fluid_C`` and an optional third ``err_C`` column; lines
starting with ``#`` are comments.  Simulation reports go out as CSV in
the same minutes / degrees-Celsius convention.  Numbers are written with
full round-trip precision, so re-ingesting a report reproduces the
simulated values bit for bit.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import IO

from .fitting import SweepResult
from .metrics import (ExperimentPoint, ExperimentalSeries, PowerCurve,
                      residuals)
from .solver import SimulationResult
from .thermal import KELVIN_OFFSET, celsius_to_kelvin


class DataError(ValueError):
    """A data file that cannot be used."""


RESULT_COLUMNS = ("time_min", "T_fluid_C", "T_container_C", "T_reflector_C",
                  "P_watts", "deltaT_C")
EXPERIMENT_COLUMNS = ("time_min", "T_fluid_C")
EXPERIMENT_ERR_COLUMN = "err_C"


def _fmt(value: float) -> str:
    """Shortest decimal form that round-trips the float exactly."""
    return repr(float(value))


def _parse_float(text: str, where: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise DataError(f"{where}: expected a number, got {text!r}") from None
    if not math.isfinite(value):
        raise DataError(f"{where}: value must be finite, got {text!r}")
    return value


def load_experimental_csv(path: str | Path,
                          t_ambient_ref: float | None = None) -> ExperimentalSeries:
    """Read a measured fluid-temperature trace.

    Expected header: ``time_min,T_fluid_C`` with an optional ``err_C``
    third column.  ``#`` lines and blank lines are skipped.  Errors name
    the offending row.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise DataError(f"{path} is not valid UTF-8: {exc}") from exc

    rows: list[tuple[int, list[str]]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        rows.append((lineno, next(csv.reader([line]))))

    if not rows:
        raise DataError(f"{path}: no header row found")

    header_line, header = rows[0]
    header = [h.strip() for h in header]
    with_err = header == list(EXPERIMENT_COLUMNS) + [EXPERIMENT_ERR_COLUMN]
    if not with_err and header != list(EXPERIMENT_COLUMNS):
        raise DataError(
            f"{path} line {header_line}: header must be "
            f"'time_min,T_fluid_C' or 'time_min,T_fluid_C,err_C', got {','.join(header)!r}")

    points = []
    expected = 3 if with_err else 2
    for lineno, cells in rows[1:]:
        where = f"{path} line {lineno}"
        cells = [c.strip() for c in cells]
        if len(cells) != expected:
            raise DataError(f"{where}: expected {expected} columns, got {len(cells)}")
        t_min = _parse_float(cells[0], f"{where} column time_min")
        t_c = _parse_float(cells[1], f"{where} column T_fluid_C")
        if t_c <= -KELVIN_OFFSET:
            raise DataError(f"{where}: temperature {t_c} C is at or below absolute zero")
        err = None
        if with_err:
            err = _parse_float(cells[2], f"{where} column err_C")
            if err < 0.0:
                raise DataError(f"{where}: err_C must be >= 0, got {err}")
        points.append(ExperimentPoint(time=t_min * 60.0,
                                      t_fluid=celsius_to_kelvin(t_c),
                                      uncertainty=err))

    if len(points) < 2:
        raise DataError(f"{path}: need at least two data rows, got {len(points)}")
    for i, (a, b) in enumerate(zip(points, points[1:])):
        if a.time >= b.time:
            raise DataError(f"{path}: times must be strictly increasing "
                            f"(data row {i + 2} does not advance)")
    try:
        return ExperimentalSeries(points=tuple(points), t_ambient_ref=t_ambient_ref)
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from exc


def write_result_csv(result: SimulationResult, stream: IO[str]) -> None:
    """Write the simulation output table."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(RESULT_COLUMNS)
    for sample in result.samples:
        state = sample.state
        ambient = result.env.ambient(state.time)
        writer.writerow([
            _fmt(state.time / 60.0),
            _fmt(state.t_fluid - KELVIN_OFFSET),
            _fmt(state.t_container - KELVIN_OFFSET),
            _fmt(state.t_reflector - KELVIN_OFFSET),
            _fmt(sample.cooking_power),
            _fmt(state.t_fluid - ambient),
        ])


def write_power_csv(curve: PowerCurve, stream: IO[str]) -> None:
    """Write a cooking-power curve as deltaT_C,P_watts rows."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(("deltaT_C", "P_watts"))
    for point in curve.points:
        writer.writerow([_fmt(point.delta_t), _fmt(point.power)])


def write_residuals_csv(result: SimulationResult, experiment: ExperimentalSeries,
                        stream: IO[str]) -> None:
    """Write the per-point comparison of a run against a measured trace."""
    times, measured_c, simulated_c = residuals(result, experiment)
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(("time_min", "T_fluid_exp_C", "T_fluid_sim_C",
                     "residual_C", "abs_pct_error"))
    for t, exp_c, sim_c in zip(times, measured_c, simulated_c):
        writer.writerow([
            _fmt(t / 60.0),
            _fmt(exp_c),
            _fmt(sim_c),
            _fmt(sim_c - exp_c),
            _fmt(100.0 * abs(sim_c - exp_c) / exp_c) if exp_c != 0.0 else "",
        ])


def write_sweep_csv(result: SweepResult, stream: IO[str]) -> None:
    """Write sweep rows; unavailable figures stay empty, failures carry
    their description in the error column."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(list(result.param_names)
                    + ["boiling_time_min", "standardized_power_W",
                       "final_T_fluid_C", "error"])
    for row in result.rows:
        cells: list[str] = [_fmt(v) for v in row.values]
        cells.append(_fmt(row.boiling_time / 60.0) if row.boiling_time is not None else "")
        cells.append(_fmt(row.standardized_power) if row.standardized_power is not None else "")
        cells.append(_fmt(row.final_t_fluid - KELVIN_OFFSET)
                     if math.isfinite(row.final_t_fluid) else "")
        cells.append(row.error or "")
        writer.writerow(cells)
