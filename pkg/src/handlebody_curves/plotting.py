"""Minimal SVG and CSV emitters for experiment reports."""

from __future__ import annotations

import csv
from typing import Sequence


def write_csv(path: str, header: Sequence[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r in rows:
            w.writerow(r)


def _frame(width, height, title):
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="monospace" font-size="11">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2}" y="16" text-anchor="middle">{title}</text>',
    ]


def svg_histogram(values: Sequence[int], path: str, title: str = "", xlabel: str = "") -> None:
    """Bar chart of integer value counts."""
    width, height, pad = 480, 300, 40
    counts: dict = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    keys = sorted(counts) or [0]
    top = max(counts.values(), default=1)
    bw = (width - 2 * pad) / max(1, len(keys))
    out = _frame(width, height, title)
    for i, k in enumerate(keys):
        h = (height - 2 * pad) * counts.get(k, 0) / top
        x = pad + i * bw
        out.append(f'<rect x="{x + 2:.1f}" y="{height - pad - h:.1f}" width="{bw - 4:.1f}" height="{h:.1f}" fill="#4a7"/>')
        out.append(f'<text x="{x + bw / 2:.1f}" y="{height - pad + 14}" text-anchor="middle">{k}</text>')
        out.append(f'<text x="{x + bw / 2:.1f}" y="{height - pad - h - 3:.1f}" text-anchor="middle">{counts.get(k, 0)}</text>')
    out.append(f'<text x="{width / 2}" y="{height - 6}" text-anchor="middle">{xlabel}</text>')
    out.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(out))


def svg_log_plot(xs: Sequence[float], ys: Sequence[float], path: str, title: str = "") -> None:
    """Polyline of log10(y) against x; nonpositive y are clipped."""
    import math

    width, height, pad = 480, 300, 40
    pts = [(x, math.log10(y)) for x, y in zip(xs, ys) if y > 0]
    out = _frame(width, height, title)
    if pts:
        x0, x1 = min(p[0] for p in pts), max(p[0] for p in pts)
        y0, y1 = min(p[1] for p in pts), max(p[1] for p in pts)
        sx = (width - 2 * pad) / ((x1 - x0) or 1)
        sy = (height - 2 * pad) / ((y1 - y0) or 1)
        poly = " ".join(f"{pad + (x - x0) * sx:.1f},{height - pad - (y - y0) * sy:.1f}" for x, y in pts)
        out.append(f'<polyline points="{poly}" fill="none" stroke="#a33"/>')
        out.append(f'<text x="{pad}" y="{pad - 6}">log10 max {y1:.2f}</text>')
        out.append(f'<text x="{pad}" y="{height - 6}">log10 min {y0:.2f}</text>')
    out.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(out))
