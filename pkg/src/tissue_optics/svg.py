"""Dependency-free SVG line charts for spectra and sweep results.

Output is plain text built from the input alone (fixed palette, fixed
float formatting, no timestamps), so identical specs render to identical
bytes and golden-file tests can diff the output directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")

Y_SCALE_LINEAR = "linear"
Y_SCALE_LOG10 = "log10"


@dataclass(frozen=True)
class Series:
    label: str
    x: tuple[float, ...]
    y: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.x) != len(self.y) or len(self.x) == 0:
            raise ValueError("series needs matching non-empty x and y sequences")
        if any(self.x[i] >= self.x[i + 1] for i in range(len(self.x) - 1)):
            raise ValueError("series x values must be strictly increasing")


@dataclass(frozen=True)
class PlotSpec:
    series: tuple[Series, ...]
    x_label: str
    y_label: str
    y_scale: str = Y_SCALE_LINEAR
    title: str = ""
    width: int = 900
    height: int = 560

    def __post_init__(self) -> None:
        if not self.series:
            raise ValueError("plot needs at least one series")
        if self.y_scale not in (Y_SCALE_LINEAR, Y_SCALE_LOG10):
            raise ValueError(f"y_scale must be 'linear' or 'log10', got {self.y_scale!r}")
        spans = {(s.x[0], s.x[-1]) for s in self.series}
        if len(spans) != 1:
            raise ValueError("all series must share a common x range")


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def _linear_ticks(lo: float, hi: float) -> list[float]:
    if lo == hi:
        return [lo - 0.5, lo + 0.5]
    return [lo + (hi - lo) * i / 4 for i in range(5)]


def _decade_ticks(lo: float, hi: float) -> list[float]:
    lo_exp = int(np.ceil(np.log10(lo) - 1e-12))
    hi_exp = int(np.floor(np.log10(hi) + 1e-12))
    if lo_exp > hi_exp:
        return [lo, hi]
    return [10.0**k for k in range(lo_exp, hi_exp + 1)]


def render_svg(spec: PlotSpec) -> str:
    """Render the chart to an SVG document string."""
    width, height = spec.width, spec.height
    left, right, top, bottom = 70, width - 170, 50, height - 70

    xs = [x for s in spec.series for x in s.x]
    ys = [y for s in spec.series for y in s.y]
    x_lo, x_hi = min(xs), max(xs)

    log_scale = spec.y_scale == Y_SCALE_LOG10
    if log_scale:
        positive = [y for y in ys if y > 0]
        if not positive:
            raise ValueError("log10 scale needs at least one positive y value")
        y_lo, y_hi = min(positive), max(positive)
        ticks = _decade_ticks(y_lo, y_hi)
        y_lo, y_hi = min(y_lo, ticks[0]), max(y_hi, ticks[-1])
        to_axis = lambda y: np.log10(max(y, y_lo))
    else:
        y_lo, y_hi = min(ys), max(ys)
        ticks = _linear_ticks(y_lo, y_hi)
        y_lo, y_hi = ticks[0], ticks[-1]
        to_axis = lambda y: y

    axis_lo, axis_hi = to_axis(y_lo), to_axis(y_hi)
    axis_span = (axis_hi - axis_lo) or 1.0
    x_span = (x_hi - x_lo) or 1.0

    def px(x: float) -> float:
        return left + (x - x_lo) / x_span * (right - left)

    def py(y: float) -> float:
        return bottom - (to_axis(y) - axis_lo) / axis_span * (bottom - top)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="#ffffff"/>',
    ]
    if spec.title:
        out.append(
            f'<text x="{(left + right) / 2:.2f}" y="28" text-anchor="middle" '
            f'font-size="18" font-family="Helvetica">{_escape(spec.title)}</text>'
        )

    for tick in ticks:
        y = py(tick)
        out.append(
            f'<line x1="{left}" y1="{y:.2f}" x2="{right}" y2="{y:.2f}" '
            'stroke="#dddddd" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{left - 8}" y="{y + 4:.2f}" text-anchor="end" font-size="12" '
            f'font-family="Helvetica">{tick:.6g}</text>'
        )

    x_ticks = [x_lo + (x_hi - x_lo) * i / 6 for i in range(7)] if x_hi > x_lo else [x_lo]
    for tick in x_ticks:
        x = px(tick)
        out.append(
            f'<line x1="{x:.2f}" y1="{bottom}" x2="{x:.2f}" y2="{bottom + 5}" '
            'stroke="#000000" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{x:.2f}" y="{bottom + 20}" text-anchor="middle" font-size="12" '
            f'font-family="Helvetica">{tick:.6g}</text>'
        )

    out.append(
        f'<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" '
        'stroke="#000000" stroke-width="1.5"/>'
    )
    out.append(
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{bottom}" '
        'stroke="#000000" stroke-width="1.5"/>'
    )

    for idx, series in enumerate(spec.series):
        color = PALETTE[idx % len(PALETTE)]
        points = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(series.x, series.y))
        out.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{points}"/>'
        )
        ly = top + 18 * idx
        out.append(
            f'<line x1="{right + 12}" y1="{ly}" x2="{right + 36}" y2="{ly}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        out.append(
            f'<text x="{right + 42}" y="{ly + 4}" font-size="12" '
            f'font-family="Helvetica">{_escape(series.label)}</text>'
        )

    out.append(
        f'<text x="{(left + right) / 2:.2f}" y="{height - 28}" text-anchor="middle" '
        f'font-size="14" font-family="Helvetica">{_escape(spec.x_label)}</text>'
    )
    out.append(
        f'<text x="22" y="{(top + bottom) / 2:.2f}" text-anchor="middle" font-size="14" '
        f'font-family="Helvetica" transform="rotate(-90 22 {(top + bottom) / 2:.2f})">'
        f"{_escape(spec.y_label)}</text>"
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(spec: PlotSpec, path: str | Path) -> None:
    Path(path).write_text(render_svg(spec), encoding="utf-8")
