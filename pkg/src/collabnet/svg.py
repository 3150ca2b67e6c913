"""Deterministic SVG scatter/line plots.

Canvas is 800x600. The plot box spans x in [PLOT_LEFT, PLOT_RIGHT] and
y in [PLOT_TOP, PLOT_BOTTOM] pixels; each axis' data range is padded by 5%
of its span on both sides (a zero span is treated as 1) and mapped
linearly onto the box, with y increasing upward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 800, 600
PLOT_LEFT, PLOT_RIGHT = 80.0, 770.0
PLOT_TOP, PLOT_BOTTOM = 40.0, 530.0
MARGIN = 0.05
RADIUS = 4
PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
)
UNCLUSTERED = "#333333"
N_TICKS = 5


@dataclass
class ScatterPlotSpec:
    points: list[tuple[float, float, int | None]] = field(default_factory=list)
    x_label: str = "x"
    y_label: str = "y"
    title: str = ""
    vlines: list[float] = field(default_factory=list)
    hlines: list[float] = field(default_factory=list)
    line: bool = False
    metadata: dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        for p in self.points:
            if not (math.isfinite(p[0]) and math.isfinite(p[1])):
                raise ValueError(f"non-finite point {p}")


def color(cluster: int | None) -> str:
    if cluster is None:
        return UNCLUSTERED
    return PALETTE[cluster % len(PALETTE)]


def padded_range(values) -> tuple[float, float]:
    if not values:
        return 0.0, 1.0
    lo, hi = min(values), max(values)
    span = hi - lo if hi > lo else 1.0
    return lo - MARGIN * span, hi + MARGIN * span


class _Axis:
    def __init__(self, lo, hi, p0, p1):
        self.lo, self.hi, self.p0, self.p1 = lo, hi, p0, p1

    def __call__(self, v):
        return self.p0 + (v - self.lo) / (self.hi - self.lo) * (self.p1 - self.p0)


def _f(v: float) -> str:
    return f"{v:.2f}"


def _tick(v: float) -> str:
    return f"{v:.4g}"


def axis_maps(spec: ScatterPlotSpec):
    """The affine data-to-pixel maps used by :func:`render_scatter`."""
    xs = [p[0] for p in spec.points] + list(spec.vlines)
    ys = [p[1] for p in spec.points] + list(spec.hlines)
    fx = _Axis(*padded_range(xs), PLOT_LEFT, PLOT_RIGHT)
    fy = _Axis(*padded_range(ys), PLOT_BOTTOM, PLOT_TOP)
    return fx, fy


def render_scatter(spec: ScatterPlotSpec) -> str:
    fx, fy = axis_maps(spec)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
    ]
    if spec.metadata:
        meta = " ".join(f"{k}={v}" for k, v in spec.metadata.items()).replace("--", "- -")
        out.append(f"<!-- {meta} -->")
    out.append(f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>')
    if spec.title:
        out.append(f'<text x="{WIDTH / 2:.0f}" y="24" text-anchor="middle" font-size="16">{escape(spec.title)}</text>')

    # axes and ticks
    out.append(f'<line x1="{_f(PLOT_LEFT)}" y1="{_f(PLOT_BOTTOM)}" x2="{_f(PLOT_RIGHT)}" y2="{_f(PLOT_BOTTOM)}" stroke="black"/>')
    out.append(f'<line x1="{_f(PLOT_LEFT)}" y1="{_f(PLOT_BOTTOM)}" x2="{_f(PLOT_LEFT)}" y2="{_f(PLOT_TOP)}" stroke="black"/>')
    for i in range(N_TICKS):
        vx = fx.lo + (fx.hi - fx.lo) * i / (N_TICKS - 1)
        px = fx(vx)
        out.append(f'<line x1="{_f(px)}" y1="{_f(PLOT_BOTTOM)}" x2="{_f(px)}" y2="{_f(PLOT_BOTTOM + 5)}" stroke="black"/>')
        out.append(f'<text x="{_f(px)}" y="{_f(PLOT_BOTTOM + 20)}" text-anchor="middle" font-size="11">{_tick(vx)}</text>')
        vy = fy.lo + (fy.hi - fy.lo) * i / (N_TICKS - 1)
        py = fy(vy)
        out.append(f'<line x1="{_f(PLOT_LEFT - 5)}" y1="{_f(py)}" x2="{_f(PLOT_LEFT)}" y2="{_f(py)}" stroke="black"/>')
        out.append(f'<text x="{_f(PLOT_LEFT - 8)}" y="{_f(py + 4)}" text-anchor="end" font-size="11">{_tick(vy)}</text>')
    out.append(
        f'<text x="{_f((PLOT_LEFT + PLOT_RIGHT) / 2)}" y="{HEIGHT - 20}" text-anchor="middle" '
        f'font-size="13">{escape(spec.x_label)}</text>'
    )
    cy = (PLOT_TOP + PLOT_BOTTOM) / 2
    out.append(
        f'<text x="20" y="{_f(cy)}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 20 {_f(cy)})">{escape(spec.y_label)}</text>'
    )

    for v in spec.vlines:
        out.append(f'<line class="threshold" x1="{_f(fx(v))}" y1="{_f(PLOT_BOTTOM)}" x2="{_f(fx(v))}" '
                   f'y2="{_f(PLOT_TOP)}" stroke="#999999" stroke-dasharray="6,4"/>')
    for v in spec.hlines:
        out.append(f'<line class="threshold" x1="{_f(PLOT_LEFT)}" y1="{_f(fy(v))}" x2="{_f(PLOT_RIGHT)}" '
                   f'y2="{_f(fy(v))}" stroke="#999999" stroke-dasharray="6,4"/>')

    if spec.line:
        if spec.points:
            coords = " ".join(f"{_f(fx(x))},{_f(fy(y))}" for x, y, _ in spec.points)
            out.append(f'<polyline points="{coords}" fill="none" stroke="{color(spec.points[0][2])}" stroke-width="2"/>')
    else:
        for x, y, c in spec.points:
            out.append(f'<circle cx="{_f(fx(x))}" cy="{_f(fy(y))}" r="{RADIUS}" fill="{color(c)}"/>')

    out.append("</svg>")
    return "\n".join(out) + "\n"
