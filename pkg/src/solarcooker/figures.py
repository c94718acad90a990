"""Report figures rendered with matplotlib.

These functions build matplotlib Figure objects directly (no pyplot, no
global state), so they work headless and can be saved to any raster or
vector format matplotlib supports.  The CLI routes ``--plot`` targets
with a non-SVG extension here; SVG targets go to the dependency-free
writer in :mod:`solarcooker.svgplot`.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib as mpl
from matplotlib.figure import Figure

from .fitting import SweepResult
from .metrics import (DELTA_T_REFERENCE, ExperimentalSeries, PowerCurve)
from .solver import SimulationResult
from .thermal import KELVIN_OFFSET

STYLE = {
    "figure.figsize": (7.0, 4.4),
    "figure.dpi": 110,
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.35,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "lines.linewidth": 1.7,
}


def temperature_figure(result: SimulationResult) -> Figure:
    """Three temperature traces against time in minutes."""
    with mpl.rc_context(STYLE):
        fig = Figure()
        ax = fig.subplots()
        minutes = result.times() / 60.0
        ax.plot(minutes, result.t_fluid() - KELVIN_OFFSET, label="fluid")
        ax.plot(minutes, result.t_container() - KELVIN_OFFSET, label="container")
        ax.plot(minutes, result.t_reflector() - KELVIN_OFFSET, label="reflectors")
        ax.set_xlabel("time [min]")
        ax.set_ylabel("temperature [°C]")
        ax.set_title("Simulated temperatures")
        ax.legend()
    return fig


def power_figure(curve: PowerCurve, standardized: float | None = None) -> Figure:
    """Cooking power against the fluid rise above ambient."""
    with mpl.rc_context(STYLE):
        fig = Figure()
        ax = fig.subplots()
        ax.plot(curve.delta_t(), curve.power(), label="cooking power")
        if standardized is not None:
            ax.plot([DELTA_T_REFERENCE], [standardized], "o",
                    label=f"standardized: {standardized:.1f} W")
        ax.set_xlabel("fluid rise above ambient [K]")
        ax.set_ylabel("power [W]")
        ax.set_title("Cooking power")
        ax.legend()
    return fig


def comparison_figure(result: SimulationResult,
                      experiment: ExperimentalSeries) -> Figure:
    """Simulated fluid temperature with measured points and error bars."""
    with mpl.rc_context(STYLE):
        fig = Figure()
        ax = fig.subplots()
        minutes = result.times() / 60.0
        ax.plot(minutes, result.t_fluid() - KELVIN_OFFSET, label="simulated")
        exp_min = experiment.times() / 60.0
        exp_c = experiment.t_fluid() - KELVIN_OFFSET
        errs = [p.uncertainty for p in experiment.points]
        if all(e is not None for e in errs):
            ax.errorbar(exp_min, exp_c, yerr=errs, fmt="o", ms=4,
                        capsize=3, label="measured")
        else:
            ax.plot(exp_min, exp_c, "o", ms=4, label="measured")
        ax.set_xlabel("time [min]")
        ax.set_ylabel("fluid temperature [°C]")
        ax.set_title("Model versus measurement")
        ax.legend()
    return fig


def sweep_figure(result: SweepResult) -> Figure:
    """Boiling time and standardized power against a single swept parameter."""
    if len(result.param_names) != 1:
        raise ValueError("sweep figures need a one-parameter sweep, "
                         f"got {len(result.param_names)} axes")
    xs = [row.values[0] for row in result.rows]
    boil = [row.boiling_time / 60.0 if row.boiling_time is not None else float("nan")
            for row in result.rows]
    power = [row.standardized_power if row.standardized_power is not None else float("nan")
             for row in result.rows]
    with mpl.rc_context(STYLE):
        fig = Figure()
        ax = fig.subplots()
        ax.plot(xs, boil, "o-", color="#1f77b4", label="boiling time [min]")
        ax.set_xlabel(result.param_names[0])
        ax.set_ylabel("boiling time [min]", color="#1f77b4")
        twin = ax.twinx()
        twin.plot(xs, power, "s--", color="#d62728", label="standardized power [W]")
        twin.set_ylabel("standardized power [W]", color="#d62728")
        twin.grid(False)
        ax.set_title("Sweep summary")
    return fig


def save_figure(fig: Figure, path: str | Path) -> None:
    fig.savefig(path, dpi=150, bbox_inches="tight")
