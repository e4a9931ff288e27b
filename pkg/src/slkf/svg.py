"""Minimal fixed-layout SVG line charts of trace columns."""
from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

from .errors import IoError, UnknownColumn
from .runner import FLOAT_COLUMNS, RunOutput

WIDTH, HEIGHT = 800, 300
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 60, 150, 20, 40
PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
           "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")
BAND_COLUMN = "avg_nis"


def nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    """Round-numbered ticks covering ``[lo, hi]``."""
    if not hi > lo:
        hi = lo + 1.0
    raw = (hi - lo) / target
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    start = math.ceil(lo / step - 1e-9) * step
    ticks = []
    t = start
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 12))
        t += step
    return ticks


def _fmt(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".") if v != int(v) else str(int(v))


def _segments(xs, ys):
    """Split a series at missing values into drawable runs."""
    run = []
    for x, y in zip(xs, ys):
        if math.isfinite(y):
            run.append((x, y))
        elif run:
            yield run
            run = []
    if run:
        yield run


def render_svg(columns, out: RunOutput, path) -> str:
    """Plot ``columns`` for every sensor in ``out``; writes ``path`` and returns the text."""
    columns = [columns] if isinstance(columns, str) else list(columns)
    for c in columns:
        if c not in FLOAT_COLUMNS:
            raise UnknownColumn(f"unknown column {c!r}; choose from {', '.join(FLOAT_COLUMNS)}")

    series = []  # (label, ks, values)
    bands = []   # (ks, lo, hi)
    for name in sorted(out.sensors):
        ks = np.array([r.k for r in out.sensors[name]], dtype=float)
        for c in columns:
            label = name if len(columns) == 1 else f"{name} {c}"
            series.append((label, ks, out.column(name, c)))
        if BAND_COLUMN in columns and not bands:
            bands.append((ks, out.column(name, "ci_lo"), out.column(name, "ci_hi")))

    finite = [v[np.isfinite(v)] for _, _, v in series]
    finite += [b[np.isfinite(b)] for _, lo, hi in bands for b in (lo, hi)]
    values = np.concatenate(finite) if finite else np.array([])
    all_k = np.concatenate([k for _, k, _ in series]) if series else np.array([])
    x_lo, x_hi = (float(all_k.min()), float(all_k.max())) if all_k.size else (0.0, 1.0)
    y_lo, y_hi = (float(values.min()), float(values.max())) if values.size else (0.0, 1.0)
    if x_hi <= x_lo:
        x_hi = x_lo + 1.0
    if y_hi <= y_lo:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    x_ticks, y_ticks = nice_ticks(x_lo, x_hi), nice_ticks(y_lo, y_hi)
    y_lo, y_hi = min(y_lo, y_ticks[0]), max(y_hi, y_ticks[-1])

    pw, ph = WIDTH - MARGIN_L - MARGIN_R, HEIGHT - MARGIN_T - MARGIN_B

    def sx(x):
        return MARGIN_L + (x - x_lo) / (x_hi - x_lo) * pw

    def sy(y):
        return MARGIN_T + ph - (y - y_lo) / (y_hi - y_lo) * ph

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
             f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
             f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>']

    for ks, lo, hi in bands:
        for run in _segments(zip(ks, lo), hi):
            if len(run) < 2:
                continue
            upper = [f"{sx(k):.2f},{sy(h):.2f}" for (k, _), h in run]
            lower = [f"{sx(k):.2f},{sy(l):.2f}" for (k, l), _ in reversed(run)]
            parts.append(f'<polygon class="band" points="{" ".join(upper + lower)}" '
                         f'fill="#999999" fill-opacity="0.3" stroke="none"/>')

    x0, y0 = MARGIN_L, MARGIN_T + ph
    parts.append(f'<line x1="{x0}" y1="{y0}" x2="{x0 + pw}" y2="{y0}" stroke="black"/>')
    parts.append(f'<line x1="{x0}" y1="{MARGIN_T}" x2="{x0}" y2="{y0}" stroke="black"/>')
    for t in x_ticks:
        x = sx(t)
        parts.append(f'<line x1="{x:.2f}" y1="{y0}" x2="{x:.2f}" y2="{y0 + 5}" stroke="black"/>')
        parts.append(f'<text x="{x:.2f}" y="{y0 + 17}" text-anchor="middle">{_fmt(t)}</text>')
    for t in y_ticks:
        y = sy(t)
        parts.append(f'<line x1="{x0 - 5}" y1="{y:.2f}" x2="{x0}" y2="{y:.2f}" stroke="black"/>')
        parts.append(f'<text x="{x0 - 8}" y="{y + 4:.2f}" text-anchor="end">{_fmt(t)}</text>')
    parts.append(f'<text x="{x0 + pw / 2}" y="{HEIGHT - 5}" text-anchor="middle">k</text>')
    parts.append(f'<text x="14" y="{MARGIN_T + ph / 2}" text-anchor="middle" '
                 f'transform="rotate(-90 14 {MARGIN_T + ph / 2})">'
                 f'{escape(", ".join(columns))}</text>')

    for i, (label, ks, vals) in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        for run in _segments(ks, vals):
            pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in run)
            parts.append(f'<polyline class="series" data-label="{escape(label)}" points="{pts}" '
                         f'fill="none" stroke="{color}" stroke-width="1.2"/>')
        ly = MARGIN_T + 12 + 16 * i
        lx = WIDTH - MARGIN_R + 10
        parts.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 20}" y2="{ly - 4}" '
                     f'stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{lx + 25}" y="{ly}">{escape(label)}</text>')
    parts.append("</svg>")
    text = "\n".join(parts) + "\n"
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    return text
