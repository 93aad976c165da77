"""Minimal deterministic SVG line plots (no external assets)."""
from xml.sax.saxutils import escape

import numpy as np

from .asympt import c_sequence
from .geometry import fourier_eval
from .results import curve

WIDTH, HEIGHT = 640, 420
MARGIN = (70, 20, 30, 50)  # left, right, top, bottom
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _num(x):
    return f"{x:.2f}"


def _ticks(lo, hi, n=5):
    if hi == lo:
        return [lo]
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def _label(v):
    return f"{v:.4g}"


def line_plot(series, title, xlabel, ylabel, equal_aspect=False, markers=True):
    """SVG text for ``series`` = [(label, xs, ys), ...]."""
    xs = np.concatenate([np.asarray(s[1], float) for s in series])
    ys = np.concatenate([np.asarray(s[2], float) for s in series])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    if x1 == x0:
        x0, x1 = x0 - 1.0, x1 + 1.0
    if y1 == y0:
        y0, y1 = y0 - 1.0, y1 + 1.0
    left, right, top, bottom = MARGIN
    pw, ph = WIDTH - left - right, HEIGHT - top - bottom
    if equal_aspect:
        span = max(x1 - x0, y1 - y0)
        cx, cy = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
        x0, x1 = cx - 0.5 * span * pw / ph, cx + 0.5 * span * pw / ph
        y0, y1 = cy - 0.5 * span, cy + 0.5 * span

    def px(x):
        return left + (x - x0) / (x1 - x0) * pw

    def py(y):
        return top + (1.0 - (y - y0) / (y1 - y0)) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
           f'viewBox="0 0 {WIDTH} {HEIGHT}">',
           f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
           f'<text x="{WIDTH // 2}" y="18" text-anchor="middle" font-family="sans-serif" '
           f'font-size="14">{escape(title)}</text>',
           f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>']
    for t in _ticks(x0, x1):
        X = px(t)
        out.append(f'<line x1="{_num(X)}" y1="{top + ph}" x2="{_num(X)}" y2="{top + ph + 5}" '
                   f'stroke="black"/>')
        out.append(f'<text x="{_num(X)}" y="{top + ph + 18}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="11">{_label(t)}</text>')
    for t in _ticks(y0, y1):
        Y = py(t)
        out.append(f'<line x1="{left - 5}" y1="{_num(Y)}" x2="{left}" y2="{_num(Y)}" '
                   f'stroke="black"/>')
        out.append(f'<text x="{left - 8}" y="{_num(Y + 4)}" text-anchor="end" '
                   f'font-family="sans-serif" font-size="11">{_label(t)}</text>')
    out.append(f'<text x="{left + pw // 2}" y="{HEIGHT - 8}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="12">{escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{top + ph // 2}" text-anchor="middle" font-family="sans-serif" '
               f'font-size="12" transform="rotate(-90 16 {top + ph // 2})">{escape(ylabel)}</text>')
    for i, (label, sx, sy) in enumerate(series):
        color = COLORS[i % len(COLORS)]
        pts = " ".join(f"{_num(px(x))},{_num(py(y))}" for x, y in zip(sx, sy))
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        if markers:
            for x, y in zip(sx, sy):
                out.append(f'<circle cx="{_num(px(x))}" cy="{_num(py(y))}" r="2.5" fill="{color}"/>')
        out.append(f'<text x="{left + pw - 8}" y="{top + 16 + 14 * i}" text-anchor="end" '
                   f'font-family="sans-serif" font-size="11" fill="{color}">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _indices(results):
    return sorted({r.j for r in results})


def eig_curve_svg(results):
    """E_j + alpha^2 against alpha, one line per j."""
    series = []
    for j in _indices(results):
        a, e, _ = curve(results, j)
        series.append((f"j={j}", a, [ei + ai * ai for ai, ei in zip(a, e)]))
    return line_plot(series, "E_j + alpha^2", "alpha", "E_j + alpha^2")


def c_curve_svg(results):
    """c(alpha) = -(E_j + alpha^2)/alpha against alpha."""
    series = []
    for j in _indices(results):
        a, e, _ = curve(results, j)
        series.append((f"j={j}", a, c_sequence(a, e).tolist()))
    return line_plot(series, "c(alpha) = -(E_j + alpha^2)/alpha", "alpha", "c(alpha)")


def geometry_svg(spec, n=256):
    """Boundary outline (meridian section for solids of revolution)."""
    if spec.kind == "star2d":
        t = 2.0 * np.pi * np.arange(n + 1) / n
        r = fourier_eval(spec.cos, spec.sin, t)[0]
        series = [("boundary", r * np.cos(t), r * np.sin(t))]
    elif spec.kind == "revolution":
        t = np.linspace(0.0, 2.0 * np.pi, n + 1)
        # reflect the meridian to draw the full section
        phi = np.where(t <= np.pi, t, 2.0 * np.pi - t)
        r = fourier_eval(spec.cos, spec.sin, phi)[0]
        series = [("meridian", np.where(t <= np.pi, 1.0, -1.0) * r * np.sin(phi), r * np.cos(phi))]
    else:
        t = 2.0 * np.pi * np.arange(n + 1) / n
        radii = [spec.radius] if spec.kind == "ball" else [spec.outer, spec.inner]
        series = [(f"r={R:g}", R * np.cos(t), R * np.sin(t)) for R in radii]
    title = f"{spec.kind} {spec.domain_id}".strip()
    return line_plot(series, title, "x", "y", equal_aspect=True, markers=False)
