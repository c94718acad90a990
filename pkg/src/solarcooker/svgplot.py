"""Dependency-free SVG 1.1 line charts.

Each data series becomes exactly one ``<polyline>`` element, which keeps
the files small, diffable, and easy to assert on in tests.  For richer
raster/vector figures see :mod:`solarcooker.figures`.
"""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from typing import IO, NamedTuple, Sequence

from .metrics import ExperimentalSeries, PowerCurve
from .solver import SimulationResult
from .thermal import KELVIN_OFFSET

SVG_NS = "http://www.w3.org/2000/svg"

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")

_WIDTH = 800
_HEIGHT = 500
_MARGIN_L = 70
_MARGIN_R = 24
_MARGIN_T = 42
_MARGIN_B = 54


class Series(NamedTuple):
    label: str
    xs: Sequence[float]
    ys: Sequence[float]


def _nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    if lo == hi:
        pad = max(1.0, abs(lo) * 0.1)
        lo, hi = lo - pad, hi + pad
    raw = (hi - lo) / max(target - 1, 1)
    magnitude = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        step = mult * magnitude
        if raw <= step:
            break
    first = math.ceil(lo / step) * step
    ticks = []
    value = first
    while value <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(value) < 1e-12 * step else value)
        value += step
    return ticks


def _fmt_tick(value: float) -> str:
    return f"{value:g}"


def render_line_chart(series: Sequence[Series], *, x_label: str, y_label: str,
                      title: str | None = None,
                      scatter: Sequence[Series] = ()) -> str:
    """Build an SVG document: one polyline per series, optional scatter
    layers drawn as small circles."""
    all_x = [x for s in list(series) + list(scatter) for x in s.xs]
    all_y = [y for s in list(series) + list(scatter) for y in s.ys]
    if not all_x:
        raise ValueError("nothing to plot")
    x_lo, x_hi = min(all_x), max(all_x)
    y_lo, y_hi = min(all_y), max(all_y)
    if x_lo == x_hi:
        x_lo, x_hi = x_lo - 1.0, x_hi + 1.0
    if y_lo == y_hi:
        pad = max(1.0, abs(y_lo) * 0.1)
        y_lo, y_hi = y_lo - pad, y_hi + pad
    y_pad = 0.05 * (y_hi - y_lo)
    y_lo -= y_pad
    y_hi += y_pad

    plot_w = _WIDTH - _MARGIN_L - _MARGIN_R
    plot_h = _HEIGHT - _MARGIN_T - _MARGIN_B

    def px(x: float) -> float:
        return _MARGIN_L + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return _MARGIN_T + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h

    ET.register_namespace("", SVG_NS)
    root = ET.Element(f"{{{SVG_NS}}}svg", {
        "version": "1.1",
        "width": str(_WIDTH),
        "height": str(_HEIGHT),
        "viewBox": f"0 0 {_WIDTH} {_HEIGHT}",
    })
    ET.SubElement(root, f"{{{SVG_NS}}}rect", {
        "x": "0", "y": "0", "width": str(_WIDTH), "height": str(_HEIGHT),
        "fill": "#ffffff",
    })

    axis_style = {"stroke": "#333333", "stroke-width": "1", "fill": "none"}
    ET.SubElement(root, f"{{{SVG_NS}}}rect", {
        "x": str(_MARGIN_L), "y": str(_MARGIN_T),
        "width": str(plot_w), "height": str(plot_h),
        **axis_style,
    })

    def text(x: float, y: float, content: str, *, anchor: str = "middle",
             size: int = 12, rotate: bool = False) -> None:
        attrs = {
            "x": f"{x:.1f}", "y": f"{y:.1f}", "text-anchor": anchor,
            "font-family": "sans-serif", "font-size": str(size),
            "fill": "#222222",
        }
        if rotate:
            attrs["transform"] = f"rotate(-90 {x:.1f} {y:.1f})"
        el = ET.SubElement(root, f"{{{SVG_NS}}}text", attrs)
        el.text = content

    for tick in _nice_ticks(x_lo, x_hi):
        if tick < x_lo - 1e-12 or tick > x_hi + 1e-12:
            continue
        x = px(tick)
        ET.SubElement(root, f"{{{SVG_NS}}}line", {
            "x1": f"{x:.1f}", "y1": str(_MARGIN_T + plot_h),
            "x2": f"{x:.1f}", "y2": str(_MARGIN_T + plot_h + 5),
            "stroke": "#333333", "stroke-width": "1",
        })
        ET.SubElement(root, f"{{{SVG_NS}}}line", {
            "x1": f"{x:.1f}", "y1": str(_MARGIN_T),
            "x2": f"{x:.1f}", "y2": str(_MARGIN_T + plot_h),
            "stroke": "#dddddd", "stroke-width": "1",
        })
        text(x, _MARGIN_T + plot_h + 18, _fmt_tick(tick), size=11)

    for tick in _nice_ticks(y_lo, y_hi):
        if tick < y_lo - 1e-12 or tick > y_hi + 1e-12:
            continue
        y = py(tick)
        ET.SubElement(root, f"{{{SVG_NS}}}line", {
            "x1": str(_MARGIN_L - 5), "y1": f"{y:.1f}",
            "x2": str(_MARGIN_L), "y2": f"{y:.1f}",
            "stroke": "#333333", "stroke-width": "1",
        })
        ET.SubElement(root, f"{{{SVG_NS}}}line", {
            "x1": str(_MARGIN_L), "y1": f"{y:.1f}",
            "x2": str(_MARGIN_L + plot_w), "y2": f"{y:.1f}",
            "stroke": "#dddddd", "stroke-width": "1",
        })
        text(_MARGIN_L - 9, y + 4, _fmt_tick(tick), anchor="end", size=11)

    text(_MARGIN_L + plot_w / 2, _HEIGHT - 14, x_label)
    text(18, _MARGIN_T + plot_h / 2, y_label, rotate=True)
    if title:
        text(_WIDTH / 2, 24, title, size=15)

    for i, s in enumerate(series):
        color = _PALETTE[i % len(_PALETTE)]
        points = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(s.xs, s.ys))
        ET.SubElement(root, f"{{{SVG_NS}}}polyline", {
            "points": points,
            "fill": "none",
            "stroke": color,
            "stroke-width": "1.8",
        })

    for j, s in enumerate(scatter):
        color = _PALETTE[(len(series) + j) % len(_PALETTE)]
        for x, y in zip(s.xs, s.ys):
            ET.SubElement(root, f"{{{SVG_NS}}}circle", {
                "cx": f"{px(x):.2f}", "cy": f"{py(y):.2f}", "r": "3",
                "fill": color, "stroke": "none",
            })

    legend_x = _MARGIN_L + plot_w - 150
    legend_y = _MARGIN_T + 14
    for i, s in enumerate(list(series) + list(scatter)):
        color = _PALETTE[i % len(_PALETTE)]
        y = legend_y + 17 * i
        ET.SubElement(root, f"{{{SVG_NS}}}line", {
            "x1": str(legend_x), "y1": str(y - 4),
            "x2": str(legend_x + 22), "y2": str(y - 4),
            "stroke": color, "stroke-width": "2.5",
        })
        text(legend_x + 28, y, s.label, anchor="start", size=11)

    return ('<?xml version="1.0" encoding="UTF-8"?>\n'
            + ET.tostring(root, encoding="unicode"))


def temperature_chart(result: SimulationResult) -> str:
    """Fluid, container, and reflector temperatures against time."""
    minutes = result.times() / 60.0
    return render_line_chart(
        [
            Series("Fluid", minutes, result.t_fluid() - KELVIN_OFFSET),
            Series("Container", minutes, result.t_container() - KELVIN_OFFSET),
            Series("Reflectors", minutes, result.t_reflector() - KELVIN_OFFSET),
        ],
        x_label="time [min]", y_label="temperature [C]",
        title="Simulated temperatures",
    )


def power_chart(curve: PowerCurve) -> str:
    """Cooking power against the fluid rise above ambient."""
    return render_line_chart(
        [Series("Cooking power", curve.delta_t(), curve.power())],
        x_label="fluid rise above ambient [K]", y_label="power [W]",
        title="Cooking power",
    )


def comparison_chart(result: SimulationResult,
                     experiment: ExperimentalSeries) -> str:
    """Simulated fluid temperature with the measured points overlaid."""
    minutes = result.times() / 60.0
    return render_line_chart(
        [Series("Simulated fluid", minutes, result.t_fluid() - KELVIN_OFFSET)],
        scatter=[Series("Measured", experiment.times() / 60.0,
                        experiment.t_fluid() - KELVIN_OFFSET)],
        x_label="time [min]", y_label="temperature [C]",
        title="Model versus measurement",
    )


def write_svg(svg_text: str, stream: IO[str]) -> None:
    stream.write(svg_text)
