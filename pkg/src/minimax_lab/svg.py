"""Minimal SVG line and scatter plots, enough to eyeball a trace."""

from __future__ import annotations

import numpy as np

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f")
W, H, PAD = 640, 400, 50


def _scale(v: np.ndarray, lo: float, hi: float, a: float, b: float) -> np.ndarray:
    span = hi - lo if hi > lo else 1.0
    return a + (v - lo) / span * (b - a)


def _frame(title: str, xlim, ylim) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<rect x="{PAD}" y="{PAD}" width="{W - 2 * PAD}" height="{H - 2 * PAD}" fill="none" stroke="black"/>',
        f'<text x="{W / 2}" y="{PAD / 2}" text-anchor="middle" font-size="14">{title}</text>',
        f'<text x="{PAD}" y="{H - PAD / 3}" font-size="10">{xlim[0]:.4g}</text>',
        f'<text x="{W - PAD}" y="{H - PAD / 3}" text-anchor="end" font-size="10">{xlim[1]:.4g}</text>',
        f'<text x="{PAD - 4}" y="{H - PAD}" text-anchor="end" font-size="10">{ylim[0]:.4g}</text>',
        f'<text x="{PAD - 4}" y="{PAD + 10}" text-anchor="end" font-size="10">{ylim[1]:.4g}</text>',
    ]


def line_plot(x, series: dict[str, np.ndarray], title: str, max_points: int = 2000) -> str:
    x = np.asarray(x, dtype=float)
    stride = max(1, x.size // max_points)
    x = x[::stride]
    ys = {k: np.asarray(v, dtype=float)[::stride] for k, v in series.items()}
    allv = np.concatenate(list(ys.values()))
    xlim = (float(x.min()), float(x.max()))
    ylim = (float(allv.min()), float(allv.max()))
    out = _frame(title, xlim, ylim)
    px = _scale(x, *xlim, PAD, W - PAD)
    for i, (name, y) in enumerate(ys.items()):
        py = _scale(y, *ylim, H - PAD, PAD)
        pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
        color = _COLORS[i % len(_COLORS)]
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{pts}"/>')
        out.append(f'<text x="{W - PAD + 4}" y="{PAD + 14 * (i + 1)}" font-size="10" fill="{color}">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def scatter_plot(points, title: str, lim: float = 1.5, marks=None) -> str:
    p = np.asarray(points, dtype=float)
    out = _frame(title, (-lim, lim), (-lim, lim))
    px = _scale(p[:, 0], -lim, lim, PAD, W - PAD)
    py = _scale(p[:, 1], -lim, lim, H - PAD, PAD)
    for a, b in zip(px, py):
        out.append(f'<circle cx="{a:.2f}" cy="{b:.2f}" r="1" fill="#1f77b4" fill-opacity="0.4"/>')
    if marks is not None:
        m = np.asarray(marks, dtype=float)
        for a, b in zip(_scale(m[:, 0], -lim, lim, PAD, W - PAD), _scale(m[:, 1], -lim, lim, H - PAD, PAD)):
            out.append(f'<circle cx="{a:.2f}" cy="{b:.2f}" r="4" fill="none" stroke="#d62728"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
