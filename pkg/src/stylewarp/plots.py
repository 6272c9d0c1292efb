"""Self-contained SVG emitters: scatter layout, signal curves, alignment chart.

Everything is plain string assembly with fixed float formatting, so a given
input always produces byte-identical files.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .analysis import Layout2D
from .dtw import WarpResult, as_series
from .signal import StyleSignal

PALETTE = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
    "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
]
DEFAULT_COLOR = "#555555"

_W, _H = 640, 480
_MARGIN = 48


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _scale(values: np.ndarray, lo_px: float, hi_px: float) -> np.ndarray:
    lo, hi = float(values.min()), float(values.max())
    if hi - lo < 1e-12:
        return np.full(values.shape, (lo_px + hi_px) / 2.0)
    return lo_px + (values - lo) / (hi - lo) * (hi_px - lo_px)


def _svg_document(body: list[str], width: int = _W, height: int = _H) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">\n'
        f'<rect width="{width}" height="{height}" fill="white"/>\n'
    )
    return head + "\n".join(body) + "\n</svg>\n"


def _polyline(xs: np.ndarray, ys: np.ndarray, color: str, width: float, opacity: float) -> str:
    pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in zip(xs, ys))
    return (
        f'<polyline fill="none" stroke="{color}" stroke-width="{width}" '
        f'stroke-opacity="{opacity}" points="{pts}"/>'
    )


def scatter_svg(layout: Layout2D, groups: dict[str, str], path: str | Path) -> None:
    """One labeled circle per book, colored by group, with a legend.

    Books missing from ``groups`` (or an empty map) fall back to one default
    color. Labels are 1-based positions in the layout order.
    """
    coords = layout.coordinates
    xs = _scale(coords[:, 0], _MARGIN, _W - _MARGIN)
    ys = _scale(-coords[:, 1], _MARGIN, _H - _MARGIN)  # flip: SVG y grows downward

    group_names: list[str] = []
    for label in layout.labels:
        g = groups.get(label)
        if g is not None and g not in group_names:
            group_names.append(g)
    color_of = {g: PALETTE[i % len(PALETTE)] for i, g in enumerate(group_names)}

    body = []
    for idx, label in enumerate(layout.labels):
        color = color_of.get(groups.get(label, ""), DEFAULT_COLOR)
        body.append(
            f'<circle cx="{_fmt(xs[idx])}" cy="{_fmt(ys[idx])}" r="7" '
            f'fill="{color}" fill-opacity="0.85"><title>{label}</title></circle>'
        )
        body.append(
            f'<text x="{_fmt(xs[idx])}" y="{_fmt(ys[idx] + 4)}" font-size="9" '
            f'text-anchor="middle" fill="white">{idx + 1}</text>'
        )
    for i, g in enumerate(group_names):
        y = 16 + 16 * i
        body.append(f'<rect x="8" y="{y - 9}" width="10" height="10" fill="{color_of[g]}"/>')
        body.append(f'<text x="22" y="{y}" font-size="11" fill="black">{g}</text>')
    Path(path).write_text(_svg_document(body), encoding="utf-8")


def signal_svg(raw: StyleSignal, smoothed: StyleSignal, path: str | Path) -> None:
    """Anchor-similarity curves: raw channels faint, smoothed channels deep."""
    combined = np.concatenate([raw.matrix.ravel(), smoothed.matrix.ravel()])
    lo, hi = float(combined.min()), float(combined.max())
    if hi - lo < 1e-12:
        lo, hi = lo - 1.0, hi + 1.0

    def to_px(matrix: np.ndarray, col: int) -> tuple[np.ndarray, np.ndarray]:
        n = matrix.shape[0]
        xs = (
            np.full(n, (_MARGIN + _W - _MARGIN) / 2.0)
            if n == 1
            else _MARGIN + np.arange(n) / (n - 1) * (_W - 2 * _MARGIN)
        )
        ys = (_H - _MARGIN) - (matrix[:, col] - lo) / (hi - lo) * (_H - 2 * _MARGIN)
        return xs, ys

    body = [
        f'<text x="{_W // 2}" y="20" font-size="12" text-anchor="middle" '
        f'fill="black">{raw.book_id}</text>'
    ]
    for col in range(raw.matrix.shape[1]):
        color = PALETTE[col % len(PALETTE)]
        body.append(_polyline(*to_px(raw.matrix, col), color, 1.0, 0.25))
    for col in range(smoothed.matrix.shape[1]):
        color = PALETTE[col % len(PALETTE)]
        body.append(_polyline(*to_px(smoothed.matrix, col), color, 2.0, 1.0))
        body.append(
            f'<text x="{8 + 40 * col}" y="{_H - 8}" font-size="11" '
            f'fill="{color}">s{col}</text>'
        )
    Path(path).write_text(_svg_document(body), encoding="utf-8")


def alignment_svg(series_a, series_b, result: WarpResult, path: str | Path) -> None:
    """Two stacked curves (first channel of each series) with warp segments between them."""
    A = as_series(series_a)
    B = as_series(series_b)

    def curve(matrix: np.ndarray, top: float, bottom: float):
        n = matrix.shape[0]
        xs = (
            np.full(n, _W / 2.0)
            if n == 1
            else _MARGIN + np.arange(n) / (n - 1) * (_W - 2 * _MARGIN)
        )
        col = matrix[:, 0]
        lo, hi = float(col.min()), float(col.max())
        if hi - lo < 1e-12:
            ys = np.full(n, (top + bottom) / 2.0)
        else:
            ys = bottom - (col - lo) / (hi - lo) * (bottom - top)
        return xs, ys

    ax, ay = curve(A, _MARGIN, _H / 2 - 24)
    bx, by = curve(B, _H / 2 + 24, _H - _MARGIN)
    body = []
    stride = max(1, (len(result.path) + 199) // 200)
    segments = list(result.path[::stride])
    if result.path and segments[-1] != result.path[-1]:
        segments.append(result.path[-1])
    for i, j in segments:
        body.append(
            f'<line x1="{_fmt(ax[i - 1])}" y1="{_fmt(ay[i - 1])}" '
            f'x2="{_fmt(bx[j - 1])}" y2="{_fmt(by[j - 1])}" '
            f'stroke="#bbbbbb" stroke-width="0.6"/>'
        )
    body.append(_polyline(ax, ay, PALETTE[0], 1.6, 1.0))
    body.append(_polyline(bx, by, PALETTE[1], 1.6, 1.0))
    body.append(
        f'<text x="{_W // 2}" y="20" font-size="12" text-anchor="middle" fill="black">'
        f"alignment cost {result.cost:.6g}</text>"
    )
    Path(path).write_text(_svg_document(body), encoding="utf-8")
