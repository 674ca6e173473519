"""Minimal deterministic SVG output for dendrograms and time-series panels."""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

from .cluster import Dendrogram

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
_FONT = 'font-family="sans-serif"'


def _f(v: float) -> str:
    return f"{v:.2f}"


def _doc(width: float, height: float, body: list[str]) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(width)}" '
            f'height="{_f(height)}" viewBox="0 0 {_f(width)} {_f(height)}">')
    return "\n".join([head, f'<rect width="100%" height="100%" fill="white"/>', *body,
                      "</svg>"]) + "\n"


def _text(x, y, s, size=11, anchor="start", extra=""):
    return (f'<text x="{_f(x)}" y="{_f(y)}" font-size="{size}" {_FONT} '
            f'text-anchor="{anchor}"{extra}>{escape(str(s))}</text>')


def dendrogram_svg(dend: Dendrogram, labels=None, title: str = "",
                   width: float = 640, height: float = 380) -> str:
    """Render a dendrogram with leaves along the bottom axis."""
    labels = list(labels if labels is not None else (dend.labels or range(dend.n)))
    left, right, top, bottom = 50.0, 20.0, 30.0 if title else 15.0, 110.0
    plot_w, plot_h = width - left - right, height - top - bottom
    order = dend.leaf_order()
    hmax = max((m.height for m in dend.merges), default=1.0) or 1.0

    xpos = {leaf: left + plot_w * (i + 0.5) / dend.n for i, leaf in enumerate(order)}
    ypos = {leaf: top + plot_h for leaf in range(dend.n)}

    def y_of(h):
        return top + plot_h * (1.0 - h / hmax)

    body = []
    if title:
        body.append(_text(width / 2, 18, title, 13, "middle"))
    body.append(f'<line x1="{_f(left)}" y1="{_f(top)}" x2="{_f(left)}" '
                f'y2="{_f(top + plot_h)}" stroke="#444"/>')
    for frac in (0.0, 0.5, 1.0):
        y = y_of(frac * hmax)
        body.append(_text(left - 6, y + 4, f"{frac * hmax:.3g}", 10, "end"))
    for k, m in enumerate(dend.merges):
        node = dend.n + k
        y = y_of(m.height)
        x1, x2 = xpos[m.left], xpos[m.right]
        body.append(
            f'<path d="M{_f(x1)},{_f(ypos[m.left])} V{_f(y)} H{_f(x2)} V{_f(ypos[m.right])}" '
            f'fill="none" stroke="#222" stroke-width="1.2"/>')
        xpos[node], ypos[node] = (x1 + x2) / 2, y
    for leaf in order:
        x, y = xpos[leaf], top + plot_h + 8
        body.append(_text(x, y, labels[leaf], 11, "end",
                          f' transform="rotate(-60 {_f(x)} {_f(y)})"'))
    return _doc(width, height, body)


def panels_svg(panels, title: str = "", width: float = 720,
               panel_height: float = 140) -> str:
    """Stack of line-chart panels sharing an x axis.

    ``panels`` is a list of ``(panel_title, [(label, values), ...])``.
    """
    left, right, top, gap = 60.0, 120.0, 30.0 if title else 10.0, 28.0
    plot_w = width - left - right
    height = top + len(panels) * (panel_height + gap) + 10
    body = []
    if title:
        body.append(_text(width / 2, 18, title, 13, "middle"))
    for p, (ptitle, lines) in enumerate(panels):
        y0 = top + p * (panel_height + gap) + 16
        ph = panel_height - 16
        allv = np.concatenate([np.asarray(v, dtype=float) for _, v in lines])
        lo, hi = float(allv.min()), float(allv.max())
        if hi == lo:
            lo, hi = lo - 1.0, hi + 1.0
        body.append(_text(left, y0 - 4, ptitle, 11))
        body.append(f'<rect x="{_f(left)}" y="{_f(y0)}" width="{_f(plot_w)}" '
                    f'height="{_f(ph)}" fill="none" stroke="#999"/>')
        body.append(_text(left - 6, y0 + 10, f"{hi:.3g}", 9, "end"))
        body.append(_text(left - 6, y0 + ph, f"{lo:.3g}", 9, "end"))
        for i, (label, values) in enumerate(lines):
            v = np.asarray(values, dtype=float)
            xs = left + plot_w * np.arange(len(v)) / max(len(v) - 1, 1)
            ys = y0 + ph * (1.0 - (v - lo) / (hi - lo))
            pts = " ".join(f"{_f(x)},{_f(y)}" for x, y in zip(xs, ys))
            color = PALETTE[i % len(PALETTE)]
            body.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                        f'stroke-width="1.1"/>')
            ly = y0 + 14 * (i + 1)
            body.append(f'<line x1="{_f(left + plot_w + 8)}" y1="{_f(ly - 4)}" '
                        f'x2="{_f(left + plot_w + 24)}" y2="{_f(ly - 4)}" stroke="{color}" '
                        f'stroke-width="2"/>')
            body.append(_text(left + plot_w + 28, ly, label, 10))
    return _doc(width, height, body)
