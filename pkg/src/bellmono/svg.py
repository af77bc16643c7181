"""Hand-written SVG line charts and contour plots.

Contours come from marching squares on a rectangular grid; cells with a
NaN corner are skipped, which is how grids over non-rectangular domains
are drawn.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 640, 480
MARGIN = dict(left=70, right=20, top=40, bottom=60)
PALETTE = ["#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#7f7f7f", "#17becf"]
HIGHLIGHT = "#d62728"


@dataclass
class Series:
    x: Sequence[float]
    y: Sequence[float]
    label: str = ""
    markers: bool = True
    dashed: bool = False


def marching_squares(x, y, z, level: float) -> list[tuple[tuple[float, float], tuple[float, float]]]:
    """Line segments of the ``level`` set of ``z[i, j]`` sampled at ``(x[i], y[j])``."""
    x, y, z = np.asarray(x, float), np.asarray(y, float), np.asarray(z, float)
    segments = []
    for i in range(len(x) - 1):
        for j in range(len(y) - 1):
            corners = [(x[i], y[j]), (x[i + 1], y[j]), (x[i + 1], y[j + 1]), (x[i], y[j + 1])]
            values = [z[i, j], z[i + 1, j], z[i + 1, j + 1], z[i, j + 1]]
            if any(np.isnan(values)):
                continue
            above = [v > level for v in values]
            crossings = []
            for e in range(4):
                a, b = e, (e + 1) % 4
                if above[a] != above[b]:
                    t = (level - values[a]) / (values[b] - values[a])
                    pa, pb = corners[a], corners[b]
                    crossings.append((e, (pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1]))))
            if len(crossings) == 2:
                segments.append((crossings[0][1], crossings[1][1]))
            elif len(crossings) == 4:
                # saddle: the cell average decides which corners are connected
                pts = [p for _, p in crossings]
                if (np.mean(values) > level) == above[0]:
                    segments += [(pts[0], pts[1]), (pts[2], pts[3])]
                else:
                    segments += [(pts[3], pts[0]), (pts[1], pts[2])]
    return segments


class _Frame:
    def __init__(self, xlim, ylim):
        self.x0, self.x1 = xlim
        self.y0, self.y1 = ylim
        if self.x1 == self.x0:
            self.x1 = self.x0 + 1
        if self.y1 == self.y0:
            self.y1 = self.y0 + 1

    def px(self, x):
        span = WIDTH - MARGIN["left"] - MARGIN["right"]
        return MARGIN["left"] + (x - self.x0) / (self.x1 - self.x0) * span

    def py(self, y):
        span = HEIGHT - MARGIN["top"] - MARGIN["bottom"]
        return HEIGHT - MARGIN["bottom"] - (y - self.y0) / (self.y1 - self.y0) * span


def _axes(frame: _Frame, title: str, xlabel: str, ylabel: str) -> list[str]:
    left, bottom = MARGIN["left"], HEIGHT - MARGIN["bottom"]
    right, top = WIDTH - MARGIN["right"], MARGIN["top"]
    out = [
        f'<rect x="{left}" y="{top}" width="{right - left}" height="{bottom - top}" fill="none" stroke="black"/>',
        f'<text x="{WIDTH / 2}" y="24" text-anchor="middle" font-size="15">{escape(title)}</text>',
        f'<text x="{WIDTH / 2}" y="{HEIGHT - 15}" text-anchor="middle" font-size="13">{escape(xlabel)}</text>',
        f'<text x="18" y="{HEIGHT / 2}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 18 {HEIGHT / 2})">{escape(ylabel)}</text>',
    ]
    for v in np.linspace(frame.x0, frame.x1, 6):
        px = frame.px(v)
        out.append(f'<line x1="{px:.2f}" y1="{bottom}" x2="{px:.2f}" y2="{bottom + 5}" stroke="black"/>')
        out.append(f'<text x="{px:.2f}" y="{bottom + 18}" text-anchor="middle" font-size="11">{v:.3g}</text>')
    for v in np.linspace(frame.y0, frame.y1, 6):
        py = frame.py(v)
        out.append(f'<line x1="{left - 5}" y1="{py:.2f}" x2="{left}" y2="{py:.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 8}" y="{py + 4:.2f}" text-anchor="end" font-size="11">{v:.3g}</text>')
    return out


def _document(body: list[str]) -> str:
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">\n'
        '<rect width="100%" height="100%" fill="white"/>\n'
    )
    return head + "\n".join(body) + "\n</svg>\n"


def _limits(values, pad=0.05):
    lo, hi = float(np.nanmin(values)), float(np.nanmax(values))
    span = (hi - lo) or 1.0
    return lo - pad * span, hi + pad * span


def line_chart(series: Sequence[Series], title: str, xlabel: str, ylabel: str, xlim=None, ylim=None) -> str:
    xs = np.concatenate([np.asarray(s.x, float) for s in series])
    ys = np.concatenate([np.asarray(s.y, float) for s in series])
    frame = _Frame(xlim or _limits(xs), ylim or _limits(ys))
    body = _axes(frame, title, xlabel, ylabel)
    body.append('<g id="data" fill="none" stroke-width="2">')
    for k, s in enumerate(series):
        color = PALETTE[k % len(PALETTE)]
        pts = " ".join(f"{frame.px(a):.2f},{frame.py(b):.2f}" for a, b in zip(s.x, s.y))
        dash = ' stroke-dasharray="6,4"' if s.dashed else ""
        body.append(f'<polyline points="{pts}" stroke="{color}"{dash}/>')
        if s.markers:
            for a, b in zip(s.x, s.y):
                body.append(f'<circle cx="{frame.px(a):.2f}" cy="{frame.py(b):.2f}" r="3" fill="{color}"/>')
    body.append("</g>")
    for k, s in enumerate(series):
        if s.label:
            y = MARGIN["top"] + 18 + 16 * k
            color = PALETTE[k % len(PALETTE)]
            body.append(f'<text x="{MARGIN["left"] + 10}" y="{y}" font-size="12" fill="{color}">{escape(s.label)}</text>')
    return _document(body)


def contour_plot(x, y, z, levels: Sequence[float], highlight: float, title: str, xlabel: str, ylabel: str) -> str:
    """Contour lines of ``z[i, j]`` over ``(x[i], y[j])``; the ``highlight`` level is drawn in red."""
    frame = _Frame((float(np.min(x)), float(np.max(x))), (float(np.min(y)), float(np.max(y))))
    body = _axes(frame, title, xlabel, ylabel)
    body.append('<g id="data" fill="none">')
    for k, level in enumerate(levels):
        segs = marching_squares(x, y, z, level)
        color = PALETTE[k % len(PALETTE)]
        for (a, b), (c, d) in segs:
            body.append(
                f'<line x1="{frame.px(a):.2f}" y1="{frame.py(b):.2f}" x2="{frame.px(c):.2f}" '
                f'y2="{frame.py(d):.2f}" stroke="{color}" stroke-width="1"/>'
            )
    body.append("</g>")
    body.append(f'<g id="highlight" fill="none" stroke="{HIGHLIGHT}" stroke-width="3">')
    for (a, b), (c, d) in marching_squares(x, y, z, highlight):
        body.append(f'<line x1="{frame.px(a):.2f}" y1="{frame.py(b):.2f}" x2="{frame.px(c):.2f}" y2="{frame.py(d):.2f}"/>')
    body.append("</g>")
    body.append(
        f'<text x="{WIDTH - MARGIN["right"] - 10}" y="{MARGIN["top"] + 18}" text-anchor="end" '
        f'font-size="12" fill="{HIGHLIGHT}">level {highlight:g}</text>'
    )
    return _document(body)
