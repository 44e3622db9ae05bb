"""Minimal deterministic SVG 1.1 line charts."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 720, 440
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 170, 40, 55
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
DASHES = ("", "8,4", "2,3", "10,3,2,3", "4,4", "1,2")


@dataclass
class Curve:
    label: str
    x: np.ndarray
    y: np.ndarray


@dataclass
class Chart:
    title: str
    xlabel: str
    ylabel: str
    curves: list[Curve] = field(default_factory=list)
    hlines: list[tuple[str, float]] = field(default_factory=list)

    def add(self, label: str, x, y) -> None:
        self.curves.append(Curve(label, np.asarray(x, dtype=float), np.asarray(y, dtype=float)))


def _nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    span = hi - lo
    raw = span / target
    mag = 10.0 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=10 * mag)
    first = math.ceil(lo / step) * step
    ticks = []
    v = first
    while v <= hi + 1e-9 * span:
        ticks.append(round(v, 12))
        v += step
    return ticks


def _num(v: float) -> str:
    return f"{v:.2f}"


def render(chart: Chart) -> str:
    xs = [c.x[np.isfinite(c.x)] for c in chart.curves]
    ys = [c.y[np.isfinite(c.y)] for c in chart.curves] + [np.array([v for _, v in chart.hlines])]
    xall = np.concatenate(xs) if xs else np.array([0.0, 1.0])
    yall = np.concatenate(ys) if ys else np.array([0.0, 1.0])
    if xall.size == 0:
        xall = np.array([0.0, 1.0])
    if yall.size == 0:
        yall = np.array([0.0, 1.0])
    x0, x1 = float(xall.min()), float(xall.max())
    y0, y1 = float(yall.min()), float(yall.max())
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    pad = 0.05 * (y1 - y0) if y1 > y0 else 0.5
    y0, y1 = y0 - pad, y1 + pad
    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B

    def sx(v):
        return MARGIN_L + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return MARGIN_T + (y1 - v) / (y1 - y0) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="15">{escape(chart.title)}</text>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for v in _nice_ticks(x0, x1):
        px = sx(v)
        out.append(f'<line x1="{_num(px)}" y1="{MARGIN_T + ph}" x2="{_num(px)}" y2="{MARGIN_T + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{_num(px)}" y="{MARGIN_T + ph + 18}" text-anchor="middle">{v:g}</text>')
    for v in _nice_ticks(y0, y1):
        py = sy(v)
        out.append(f'<line x1="{MARGIN_L - 5}" y1="{_num(py)}" x2="{MARGIN_L}" y2="{_num(py)}" stroke="black"/>')
        out.append(f'<text x="{MARGIN_L - 8}" y="{_num(py + 4)}" text-anchor="end">{v:g}</text>')
    out.append(f'<text x="{MARGIN_L + pw / 2:.1f}" y="{HEIGHT - 12}" text-anchor="middle">{escape(chart.xlabel)}</text>')
    out.append(
        f'<text x="18" y="{MARGIN_T + ph / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {MARGIN_T + ph / 2:.1f})">{escape(chart.ylabel)}</text>'
    )
    legend_y = MARGIN_T + 10
    for _, value in chart.hlines:
        py = _num(sy(value))
        out.append(f'<line x1="{MARGIN_L}" y1="{py}" x2="{MARGIN_L + pw}" y2="{py}" stroke="gray" stroke-width="1"/>')
    for i, c in enumerate(chart.curves):
        ok = np.isfinite(c.x) & np.isfinite(c.y)
        pts = " ".join(f"{_num(sx(a))},{_num(sy(b))}" for a, b in zip(c.x[ok], c.y[ok]))
        dash = DASHES[i % len(DASHES)]
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        color = PALETTE[i % len(PALETTE)]
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash_attr} points="{pts}"/>')
        lx = MARGIN_L + pw + 12
        out.append(f'<line x1="{lx}" y1="{legend_y}" x2="{lx + 28}" y2="{legend_y}" stroke="{color}" stroke-width="1.5"{dash_attr}/>')
        out.append(f'<text x="{lx + 34}" y="{legend_y + 4}">{escape(c.label)}</text>')
        legend_y += 18
    for label, _ in chart.hlines:
        lx = MARGIN_L + pw + 12
        out.append(f'<line x1="{lx}" y1="{legend_y}" x2="{lx + 28}" y2="{legend_y}" stroke="gray"/>')
        out.append(f'<text x="{lx + 34}" y="{legend_y + 4}">{escape(label)}</text>')
        legend_y += 18
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write(chart: Chart, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(render(chart))
