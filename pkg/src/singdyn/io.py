"""Deterministic CSV and SVG output."""
from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

SVG_WIDTH = 800
SVG_HEIGHT = 600
_MARGIN = dict(left=80, right=170, top=40, bottom=60)
_COLORS = (
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


def _fmt(v: float) -> str:
    # repr of a Python float is the shortest round-tripping decimal
    return repr(float(v))


def write_csv(path, names: Sequence[str], data) -> Path:
    """Write a header row and full-precision rows; returns the path."""
    path = Path(path)
    data = np.atleast_2d(np.asarray(data, dtype=float))
    if data.shape[1] != len(names):
        raise ValueError("column count does not match header")
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for row in data:
            w.writerow([_fmt(v) for v in row])
    return path


def read_csv(path) -> Tuple[List[str], np.ndarray]:
    """Read a numeric CSV with header; raises ValueError if empty or non-numeric."""
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2:
        raise ValueError(f"{path}: no data rows")
    names = [n.strip() for n in rows[0]]
    try:
        data = np.array([[float(v) for v in r] for r in rows[1:] if r], dtype=float)
    except ValueError as exc:
        raise ValueError(f"{path}: non-numeric value ({exc})") from None
    if data.ndim != 2 or data.shape[1] != len(names):
        raise ValueError(f"{path}: ragged rows")
    return names, data


def _nice_ticks(lo: float, hi: float, n: int = 6) -> np.ndarray:
    if hi <= lo:
        return np.array([lo])
    raw = (hi - lo) / max(n - 1, 1)
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    start = math.ceil(lo / step - 1e-9) * step
    ticks = np.arange(start, hi + step * 1e-9, step)
    return np.round(ticks / step) * step


def _bounds(values: np.ndarray) -> Tuple[float, float]:
    lo, hi = float(np.min(values)), float(np.max(values))
    if hi - lo < 1e-12 * max(1.0, abs(lo), abs(hi)):
        pad = 0.5 if lo == 0 else 0.05 * abs(lo)
        return lo - pad, hi + pad
    pad = 0.03 * (hi - lo)
    return lo - pad, hi + pad


def _tick_label(v: float) -> str:
    if v == 0:
        return "0"
    return f"{v:.4g}"


def plot_svg(
    series: Sequence[Tuple[str, Sequence[float], Sequence[float]]],
    out,
    xlabel: str = "x",
    ylabel: str = "y",
    title: Optional[str] = None,
    equal_aspect: bool = False,
) -> Path:
    """Render polylines ``(label, xs, ys)`` into a fixed 800x600 SVG 1.1 file.

    The output depends only on the inputs (fixed number formatting, no
    timestamps), so identical data gives byte-identical files.
    """
    series = [(str(lbl), np.asarray(x, dtype=float), np.asarray(y, dtype=float)) for lbl, x, y in series]
    if not series or any(x.size == 0 or x.size != y.size for _, x, y in series):
        raise ValueError("plot needs non-empty series of matching length")
    allx = np.concatenate([x for _, x, _ in series])
    ally = np.concatenate([y for _, _, y in series])
    if not (np.all(np.isfinite(allx)) and np.all(np.isfinite(ally))):
        raise ValueError("plot data must be finite")
    x0, x1 = _bounds(allx)
    y0, y1 = _bounds(ally)
    L, R, T, B = _MARGIN["left"], _MARGIN["right"], _MARGIN["top"], _MARGIN["bottom"]
    pw, ph = SVG_WIDTH - L - R, SVG_HEIGHT - T - B
    if equal_aspect:
        sx, sy = pw / (x1 - x0), ph / (y1 - y0)
        s = min(sx, sy)
        cx, cy = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
        x0, x1 = cx - 0.5 * pw / s, cx + 0.5 * pw / s
        y0, y1 = cy - 0.5 * ph / s, cy + 0.5 * ph / s

    def X(v):
        return L + (v - x0) / (x1 - x0) * pw

    def Y(v):
        return T + ph - (v - y0) / (y1 - y0) * ph

    out_lines = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SVG_WIDTH}" '
        f'height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">',
        f'<rect x="0" y="0" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>',
        f'<rect x="{L}" y="{T}" width="{pw}" height="{ph}" fill="none" stroke="black" stroke-width="1"/>',
    ]
    for v in _nice_ticks(x0, x1):
        px = X(v)
        out_lines.append(f'<line x1="{px:.2f}" y1="{T + ph}" x2="{px:.2f}" y2="{T + ph + 5}" stroke="black"/>')
        out_lines.append(
            f'<text x="{px:.2f}" y="{T + ph + 20}" font-family="sans-serif" font-size="12" '
            f'text-anchor="middle">{_tick_label(v)}</text>'
        )
    for v in _nice_ticks(y0, y1):
        py = Y(v)
        out_lines.append(f'<line x1="{L - 5}" y1="{py:.2f}" x2="{L}" y2="{py:.2f}" stroke="black"/>')
        out_lines.append(
            f'<text x="{L - 8}" y="{py + 4:.2f}" font-family="sans-serif" font-size="12" '
            f'text-anchor="end">{_tick_label(v)}</text>'
        )
    out_lines.append(
        f'<text x="{L + pw / 2:.2f}" y="{SVG_HEIGHT - 15}" font-family="sans-serif" font-size="14" '
        f'text-anchor="middle">{_escape(xlabel)}</text>'
    )
    out_lines.append(
        f'<text x="20" y="{T + ph / 2:.2f}" font-family="sans-serif" font-size="14" '
        f'text-anchor="middle" transform="rotate(-90 20 {T + ph / 2:.2f})">{_escape(ylabel)}</text>'
    )
    if title:
        out_lines.append(
            f'<text x="{L + pw / 2:.2f}" y="25" font-family="sans-serif" font-size="16" '
            f'text-anchor="middle">{_escape(title)}</text>'
        )
    for i, (label, xs, ys) in enumerate(series):
        color = _COLORS[i % len(_COLORS)]
        pts = " ".join(f"{X(a):.2f},{Y(b):.2f}" for a, b in zip(xs, ys))
        out_lines.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>'
        )
        ly = T + 15 + 18 * i
        lx = L + pw + 15
        out_lines.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out_lines.append(
            f'<text x="{lx + 26}" y="{ly + 4}" font-family="sans-serif" font-size="12">{_escape(label)}</text>'
        )
    out_lines.append("</svg>")
    path = Path(out)
    path.write_text("\n".join(out_lines) + "\n")
    return path


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def plot_csv(in_csv, out_svg, x: Optional[str] = None, y: Optional[Sequence[str]] = None) -> Path:
    """Plot columns of a CSV: ``x`` (default first column) against each ``y``
    column (default: all others), one polyline per column."""
    names, data = read_csv(in_csv)
    if len(names) < 2:
        raise ValueError("plot needs at least two numeric columns")
    x = names[0] if x is None else x
    if x not in names:
        raise ValueError(f"unknown column {x!r}")
    ys = [n for n in names if n != x] if not y else list(y)
    for n in ys:
        if n not in names:
            raise ValueError(f"unknown column {n!r}")
    xi = names.index(x)
    series = [(n, data[:, xi], data[:, names.index(n)]) for n in ys]
    return plot_svg(series, out_svg, xlabel=x, ylabel=ys[0] if len(ys) == 1 else "value")
