"""Minimal line plots written directly as SVG text."""

import math
from typing import Mapping, Sequence, Tuple
from xml.sax.saxutils import escape

_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"]
W, H = 640, 420
ML, MR, MT, MB = 70, 150, 40, 55


def _ticks(lo: float, hi: float, n: int = 5):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=raw)
    start = math.ceil(lo / step) * step
    out = []
    v = start
    while v <= hi + 1e-9 * step:
        out.append(round(v, 12))
        v += step
    return out


def line_plot(series: Mapping[str, Tuple[Sequence[float], Sequence[float]]], path: str,
              xlabel: str = "", ylabel: str = "", title: str = "") -> None:
    xs = [x for xv, _ in series.values() for x in xv]
    ys = [y for _, yv in series.values() for y in yv if math.isfinite(y)]
    if not xs or not ys:
        raise ValueError("nothing to plot")
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(0.0, min(ys)), max(ys)
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    if y1 == y0:
        y1 = y0 + 1
    pw, ph = W - ML - MR, H - MT - MB

    def px(x):
        return ML + (x - x0) / (x1 - x0) * pw

    def py(y):
        return MT + ph - (y - y0) / (y1 - y0) * ph

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
             f'font-family="sans-serif" font-size="12">',
             f'<rect width="{W}" height="{H}" fill="white"/>',
             f'<rect x="{ML}" y="{MT}" width="{pw}" height="{ph}" fill="none" stroke="black"/>']
    for t in _ticks(x0, x1):
        parts.append(f'<line x1="{px(t):.2f}" y1="{MT + ph}" x2="{px(t):.2f}" y2="{MT + ph + 5}" stroke="black"/>')
        parts.append(f'<text x="{px(t):.2f}" y="{MT + ph + 18}" text-anchor="middle">{t:g}</text>')
    for t in _ticks(y0, y1):
        parts.append(f'<line x1="{ML - 5}" y1="{py(t):.2f}" x2="{ML}" y2="{py(t):.2f}" stroke="black"/>')
        parts.append(f'<text x="{ML - 8}" y="{py(t) + 4:.2f}" text-anchor="end">{t:g}</text>')
    for k, (name, (xv, yv)) in enumerate(series.items()):
        color = _COLORS[k % len(_COLORS)]
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xv, yv) if math.isfinite(y))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="2"/>')
        for x, y in zip(xv, yv):
            if math.isfinite(y):
                parts.append(f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="3" fill="{color}"/>')
        ly = MT + 15 + 18 * k
        parts.append(f'<line x1="{W - MR + 10}" y1="{ly}" x2="{W - MR + 30}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{W - MR + 35}" y="{ly + 4}">{escape(name)}</text>')
    parts.append(f'<text x="{ML + pw / 2}" y="{H - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    parts.append(f'<text x="16" y="{MT + ph / 2}" text-anchor="middle" '
                 f'transform="rotate(-90 16 {MT + ph / 2})">{escape(ylabel)}</text>')
    parts.append(f'<text x="{W / 2}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")
