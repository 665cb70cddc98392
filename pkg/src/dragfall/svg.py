"""Small standalone SVG 1.1 line plots, no plotting library needed."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")
_W, _H = 640, 420
_L, _R, _T, _B = 78, 20, 36, 56


def _ticks(lo, hi, log):
    if log:
        a, b = math.floor(math.log10(lo)), math.ceil(math.log10(hi))
        step = max(1, (b - a) // 8)
        return [10.0 ** k for k in range(a, b + 1, step)]
    span = hi - lo
    raw = span / 6 if span > 0 else 1.0
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=raw)
    start = math.ceil(lo / step) * step
    out = []
    v = start
    while v <= hi + 1e-9 * step:
        out.append(0.0 if abs(v) < 1e-12 * step else v)
        v += step
    return out


def _num(v):
    return f"{v:.2f}"


def _label(v):
    return f"{v:.3g}"


def line_plot(series, *, title="", xlabel="", ylabel="", logx=False, logy=False) -> str:
    """Render ``series = [(label, xs, ys), ...]`` as an SVG document string.

    Non-finite points, and non-positive ones on a log axis, are skipped and
    split the polyline.
    """

    def ok(x, y):
        return (math.isfinite(x) and math.isfinite(y)
                and (x > 0 or not logx) and (y > 0 or not logy))

    pts = [(x, y) for _, xs, ys in series for x, y in zip(xs, ys) if ok(x, y)]
    if not pts:
        raise ValueError("nothing to plot")
    tx = (lambda v: math.log10(v)) if logx else (lambda v: v)
    ty = (lambda v: math.log10(v)) if logy else (lambda v: v)
    xs_all = [p[0] for p in pts]
    ys_all = [p[1] for p in pts]
    x0, x1 = min(xs_all), max(xs_all)
    y0, y1 = min(ys_all), max(ys_all)
    if x0 == x1:
        x0, x1 = (x0 / 2, x0 * 2) if logx else (x0 - 1, x1 + 1)
    if y0 == y1:
        y0, y1 = (y0 / 2, y0 * 2) if logy else (y0 - 1, y1 + 1)
    xticks = _ticks(x0, x1, logx)
    yticks = _ticks(y0, y1, logy)
    if logx:
        x0, x1 = min(x0, xticks[0]), max(x1, xticks[-1])
    if logy:
        y0, y1 = min(y0, yticks[0]), max(y1, yticks[-1])
    pw, ph = _W - _L - _R, _H - _T - _B

    def px(v):
        return _L + (tx(v) - tx(x0)) / (tx(x1) - tx(x0)) * pw

    def py(v):
        return _T + ph - (ty(v) - ty(y0)) / (ty(y1) - ty(y0)) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W / 2:.1f}" y="22" text-anchor="middle" font-family="sans-serif" '
        f'font-size="15">{escape(title)}</text>',
        f'<rect x="{_L}" y="{_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for v in xticks:
        if x0 <= v <= x1:
            X = _num(px(v))
            out.append(f'<line x1="{X}" y1="{_T + ph}" x2="{X}" y2="{_T + ph + 5}" stroke="black"/>')
            out.append(f'<text x="{X}" y="{_T + ph + 19}" text-anchor="middle" '
                       f'font-family="sans-serif" font-size="11">{_label(v)}</text>')
    for v in yticks:
        if y0 <= v <= y1:
            Y = _num(py(v))
            out.append(f'<line x1="{_L - 5}" y1="{Y}" x2="{_L}" y2="{Y}" stroke="black"/>')
            out.append(f'<text x="{_L - 8}" y="{Y}" text-anchor="end" dominant-baseline="middle" '
                       f'font-family="sans-serif" font-size="11">{_label(v)}</text>')
    out.append(f'<text x="{_L + pw / 2:.1f}" y="{_H - 12}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="13">{escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{_T + ph / 2:.1f}" text-anchor="middle" font-family="sans-serif" '
               f'font-size="13" transform="rotate(-90 16 {_T + ph / 2:.1f})">{escape(ylabel)}</text>')
    for i, (label, xs, ys) in enumerate(series):
        color = _COLORS[i % len(_COLORS)]
        run = []
        runs = []
        for x, y in zip(xs, ys):
            if ok(x, y):
                run.append(f"{_num(px(x))},{_num(py(y))}")
            elif run:
                runs.append(run)
                run = []
        if run:
            runs.append(run)
        for r in runs:
            if len(r) == 1:
                cx, cy = r[0].split(",")
                out.append(f'<circle cx="{cx}" cy="{cy}" r="2" fill="{color}"/>')
            else:
                out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                           f'points="{" ".join(r)}"/>')
        ly = _T + 14 + 16 * i
        out.append(f'<line x1="{_L + pw - 120}" y1="{ly}" x2="{_L + pw - 100}" y2="{ly}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{_L + pw - 95}" y="{ly + 4}" font-family="sans-serif" '
                   f'font-size="11">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def level_diagram(levels, *, title="", ylabel="energy") -> str:
    """Columns of horizontal level bars; ``levels = [(label, [E1, E2, ...]), ...]``."""
    series = []
    for j, (label, es) in enumerate(levels):
        xs, ys = [], []
        for e in es:
            xs += [j + 0.1, j + 0.9, math.nan]
            ys += [e, e, math.nan]
        series.append((label, xs, ys))
    return line_plot(series, title=title, xlabel="column", ylabel=ylabel)
