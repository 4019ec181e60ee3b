"""Minimal standalone SVG line charts for sweep curves.

Writes self-contained SVG markup directly so chart output needs no renderer
and is byte-reproducible. Vertical marker lines carry their data abscissa in
a ``data-p`` attribute so tests can cross-check marker positions against the
interval solvers.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence

_WIDTH = 720
_HEIGHT = 480
_MARGIN_L = 78
_MARGIN_R = 24
_MARGIN_T = 42
_MARGIN_B = 58


def _fmt(value: float) -> str:
    return format(value, ".6g")


def _ticks(lo: float, hi: float, count: int = 6) -> list[float]:
    if hi <= lo:
        return [lo]
    span = hi - lo
    return [lo + span * i / (count - 1) for i in range(count)]


def line_chart_svg(
    xs: Sequence[float],
    ys: Sequence[float],
    *,
    title: str,
    x_label: str,
    y_label: str,
    markers: Iterable[tuple[float, str]] = (),
) -> str:
    """Render one polyline with axes and optional vertical markers."""
    if len(xs) != len(ys) or not xs:
        raise ValueError("chart needs equally sized, nonempty coordinate lists")
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    pad = 0.05 * (y_hi - y_lo) or max(1e-9, 0.05 * abs(y_hi) or 0.05)
    y_lo -= pad
    y_hi += pad

    plot_w = _WIDTH - _MARGIN_L - _MARGIN_R
    plot_h = _HEIGHT - _MARGIN_T - _MARGIN_B

    def px(x: float) -> float:
        return _MARGIN_L + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return _MARGIN_T + (y_hi - y) / (y_hi - y_lo) * plot_h

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<text x="{_WIDTH / 2:.2f}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="15">{title}</text>',
        f'<rect x="{_MARGIN_L}" y="{_MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#444" stroke-width="1"/>',
    ]

    for tick in _ticks(x_lo, x_hi):
        x = px(tick)
        parts.append(
            f'<line x1="{x:.2f}" y1="{_MARGIN_T + plot_h:.2f}" '
            f'x2="{x:.2f}" y2="{_MARGIN_T + plot_h + 5:.2f}" stroke="#444"/>'
        )
        parts.append(
            f'<text x="{x:.2f}" y="{_MARGIN_T + plot_h + 20:.2f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{_fmt(tick)}</text>'
        )
    for tick in _ticks(y_lo, y_hi):
        y = py(tick)
        parts.append(
            f'<line x1="{_MARGIN_L - 5:.2f}" y1="{y:.2f}" '
            f'x2="{_MARGIN_L:.2f}" y2="{y:.2f}" stroke="#444"/>'
        )
        parts.append(
            f'<text x="{_MARGIN_L - 9:.2f}" y="{y + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{_fmt(tick)}</text>'
        )

    parts.append(
        f'<text x="{_MARGIN_L + plot_w / 2:.2f}" y="{_HEIGHT - 14}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{x_label}</text>'
    )
    parts.append(
        f'<text x="20" y="{_MARGIN_T + plot_h / 2:.2f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 20 {_MARGIN_T + plot_h / 2:.2f})">{y_label}</text>'
    )

    for value, label in markers:
        if not x_lo <= value <= x_hi:
            continue
        x = px(value)
        parts.append(
            f'<line class="marker" data-p="{format(value, ".17g")}" '
            f'x1="{x:.2f}" y1="{_MARGIN_T}" x2="{x:.2f}" y2="{_MARGIN_T + plot_h:.2f}" '
            'stroke="#b33" stroke-width="1" stroke-dasharray="4 3"/>'
        )
        parts.append(
            f'<text x="{x + 3:.2f}" y="{_MARGIN_T + 12:.2f}" font-family="sans-serif" '
            f'font-size="10" fill="#b33">{label}</text>'
        )

    points = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
    parts.append(
        f'<polyline points="{points}" fill="none" stroke="#1a6" stroke-width="1.8"/>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_line_chart(path: str | Path, xs, ys, **kwargs) -> None:
    Path(path).write_text(line_chart_svg(xs, ys, **kwargs), encoding="utf-8")
