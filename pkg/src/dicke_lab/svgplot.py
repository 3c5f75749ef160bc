"""Minimal deterministic SVG plotting.

Hand-rolled so that identical inputs produce byte-identical documents:
fixed decimal formatting, no timestamps, no external libraries.
"""

import numpy as np

from .params import ParameterError

_W, _H = 640, 480
_ML, _MR, _MT, _MB = 70, 20, 20, 50   # margins


def _fmt(x):
    return f"{x:.4f}".rstrip("0").rstrip(".")


def _axes(x_lo, x_hi, y_lo, y_hi, xlabel, ylabel):
    def sx(x):
        return _ML + (x - x_lo) / (x_hi - x_lo) * (_W - _ML - _MR)

    def sy(y):
        return _H - _MB - (y - y_lo) / (y_hi - y_lo) * (_H - _MT - _MB)

    parts = [f'<rect x="{_ML}" y="{_MT}" width="{_W - _ML - _MR}" '
             f'height="{_H - _MT - _MB}" fill="none" stroke="black"/>']
    for i in range(5):
        xv = x_lo + i * (x_hi - x_lo) / 4
        yv = y_lo + i * (y_hi - y_lo) / 4
        parts.append(f'<text x="{_fmt(sx(xv))}" y="{_H - _MB + 18}" '
                     f'font-size="11" text-anchor="middle">{_fmt(xv)}</text>')
        parts.append(f'<text x="{_ML - 6}" y="{_fmt(sy(yv) + 4)}" '
                     f'font-size="11" text-anchor="end">{_fmt(yv)}</text>')
    parts.append(f'<text x="{_fmt((_ML + _W - _MR) / 2)}" y="{_H - 12}" '
                 f'font-size="13" text-anchor="middle">{xlabel}</text>')
    parts.append(f'<text x="16" y="{_fmt((_MT + _H - _MB) / 2)}" font-size="13" '
                 f'text-anchor="middle" transform="rotate(-90 16 '
                 f'{_fmt((_MT + _H - _MB) / 2)})">{ylabel}</text>')
    return sx, sy, parts


def _document(body):
    return ('<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">\n'
            '<rect width="100%" height="100%" fill="white"/>\n'
            + "\n".join(body) + "\n</svg>\n")


def line_chart(series, xlabel="", ylabel="", vlines=()):
    """Line plot of one or more (label, x, y) series.

    vlines marks reference x positions (e.g. the critical coupling).
    """
    if not series:
        raise ParameterError("no data to plot")
    colors = ["#1f3b99", "#b02418", "#1a7a35", "#7a1a99", "#996c1a"]
    all_x = np.concatenate([np.asarray(s[1], dtype=float) for s in series])
    all_y = np.concatenate([np.asarray(s[2], dtype=float) for s in series])
    if all_x.size == 0:
        raise ParameterError("no data to plot")
    x_lo, x_hi = float(all_x.min()), float(all_x.max())
    y_lo, y_hi = float(all_y.min()), float(all_y.max())
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad
    sx, sy, body = _axes(x_lo, x_hi, y_lo, y_hi, xlabel, ylabel)
    for xv in vlines:
        if x_lo <= xv <= x_hi:
            body.append(f'<line x1="{_fmt(sx(xv))}" y1="{_MT}" x2="{_fmt(sx(xv))}" '
                        f'y2="{_H - _MB}" stroke="#888888" stroke-dasharray="4,3"/>')
    for i, (label, xs, ys) in enumerate(series):
        pts = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in zip(xs, ys))
        color = colors[i % len(colors)]
        body.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                    f'stroke-width="1.5"/>')
        body.append(f'<text x="{_W - _MR - 8}" y="{_MT + 18 + 16 * i}" font-size="12" '
                    f'text-anchor="end" fill="{color}">{label}</text>')
    return _document(body)


def _diverging_color(v):
    """Blue-white-red map for v in [-1, 1]."""
    v = max(-1.0, min(1.0, v))
    if v >= 0:
        r, g, b = 255, round(255 * (1 - v * 0.85)), round(255 * (1 - v * 0.85))
    else:
        r, g, b = round(255 * (1 + v * 0.85)), round(255 * (1 + v * 0.85)), 255
    return f"#{r:02x}{g:02x}{b:02x}"


def _contour_segments(x, y, values, level):
    """Marching-squares line segments of the level set, in data coordinates."""
    v = values
    segs = []
    for i in range(v.shape[0] - 1):
        for jj in range(v.shape[1] - 1):
            corners = (v[i, jj], v[i, jj + 1], v[i + 1, jj + 1], v[i + 1, jj])
            if not all(np.isfinite(c) for c in corners):
                continue
            lo, hi = min(corners), max(corners)
            if not lo <= level <= hi or lo == hi:
                continue
            # edge order: bottom, right, top, left
            pts = []
            edges = (
                ((x[jj], y[i]), (x[jj + 1], y[i]), corners[0], corners[1]),
                ((x[jj + 1], y[i]), (x[jj + 1], y[i + 1]), corners[1], corners[2]),
                ((x[jj + 1], y[i + 1]), (x[jj], y[i + 1]), corners[2], corners[3]),
                ((x[jj], y[i + 1]), (x[jj], y[i]), corners[3], corners[0]),
            )
            for (x0, y0), (x1, y1), v0, v1 in edges:
                if (v0 - level) * (v1 - level) < 0:
                    t = (level - v0) / (v1 - v0)
                    pts.append((x0 + t * (x1 - x0), y0 + t * (y1 - y0)))
            for a in range(0, len(pts) - 1, 2):
                segs.append((pts[a], pts[a + 1]))
    return segs


def wigner_chart(grid, contour_level=0.5, circles=(), max_cells=128,
                 xlabel="q1 / sqrt(4J)", ylabel="p1 / sqrt(4J)"):
    """Heatmap of a Wigner grid with the half-height contour and overlay circles.

    circles are scaled radii (e.g. the classical equilibrium radius).
    """
    vals = grid.values
    vmax = np.nanmax(np.abs(vals))
    if not np.isfinite(vmax) or vmax == 0:
        raise ParameterError("empty Wigner grid")
    stride = max(1, len(grid.x) // max_cells)
    xs = grid.x[::stride]
    ys = grid.y[::stride]
    sub = vals[::stride, ::stride]
    sx, sy, body = _axes(float(grid.x[0]), float(grid.x[-1]),
                         float(grid.y[0]), float(grid.y[-1]), xlabel, ylabel)
    w = _fmt(abs(sx(xs[1]) - sx(xs[0])) + 0.5)
    h = _fmt(abs(sy(ys[1]) - sy(ys[0])) + 0.5)
    for i, yv in enumerate(ys):
        for jj, xv in enumerate(xs):
            v = sub[i, jj]
            if not np.isfinite(v):
                continue
            body.append(f'<rect x="{_fmt(sx(xv))}" y="{_fmt(sy(yv) - float(h))}" '
                        f'width="{w}" height="{h}" '
                        f'fill="{_diverging_color(v / vmax)}"/>')
    level = contour_level * np.nanmax(vals)
    segs = _contour_segments(grid.x, grid.y, vals, level)
    if segs:
        path = " ".join(f"M {_fmt(sx(a[0]))} {_fmt(sy(a[1]))} "
                        f"L {_fmt(sx(b[0]))} {_fmt(sy(b[1]))}" for a, b in segs)
        body.append(f'<path d="{path}" stroke="black" fill="none" stroke-width="1"/>')
    for r in circles:
        rx = abs(sx(r) - sx(0.0))
        ry = abs(sy(r) - sy(0.0))
        body.append(f'<ellipse cx="{_fmt(sx(0.0))}" cy="{_fmt(sy(0.0))}" '
                    f'rx="{_fmt(rx)}" ry="{_fmt(ry)}" fill="none" '
                    f'stroke="#666666" stroke-width="1.2" stroke-dasharray="6,3"/>')
    return _document(body)
