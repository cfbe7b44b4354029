"""SVG barcode panels, one per homology dimension."""
from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .persistence import PersistenceDiagram

WIDTH = 640
MARGIN_LEFT = 48
MARGIN_RIGHT = 24
BAR_GAP = 10
PANEL_PAD = 28
AXIS_HEIGHT = 30
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def _c(x: float) -> str:
    return f"{x:.2f}"


def _tick_label(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else f"{x:.3g}"


def _ticks(hi: float, count: int = 5) -> list[float]:
    if hi <= 0:
        return [0.0]
    raw = hi / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((s * mag for s in (1, 2, 5, 10) if s * mag >= raw), default=raw)
    n = int(math.floor(hi / step + 1e-9))
    return [i * step for i in range(n + 1)]


def render_barcode_svg(d: PersistenceDiagram, max_scale: float | None = None,
                       allow_empty: bool = False, title: str | None = None) -> str:
    """Horizontal interval plot; infinite bars run to ``max_scale`` with an arrowhead.

    ``max_scale`` defaults to the largest finite endpoint in the diagram.
    """
    if not d.intervals and not allow_empty:
        raise ValueError("empty diagram (pass allow_empty=True to draw axes only)")
    finite = [x for iv in d.intervals for x in (iv.birth, iv.death) if not math.isinf(x)]
    hi = max_scale if max_scale is not None else max(finite, default=1.0)
    if hi <= 0:
        hi = 1.0
    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    sx = lambda x: MARGIN_LEFT + plot_w * min(x, hi) / hi  # noqa: E731

    dims = d.dims()
    panels = []
    y = 30 if title else 10
    for k in dims:
        bars = sorted(d.in_dim(k), key=lambda iv: (iv.birth, iv.death))
        h = PANEL_PAD + BAR_GAP * len(bars) + 6
        panels.append((k, bars, y, h))
        y += h
    axis_y = y + 6
    height = axis_y + AXIS_HEIGHT

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" '
        f'viewBox="0 0 {WIDTH} {height}" font-family="sans-serif" font-size="11">',
        "<defs>",
        '<marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" '
        'markerHeight="6" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="context-stroke"/></marker>',
        "</defs>",
        f'<rect x="0" y="0" width="{WIDTH}" height="{height}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{WIDTH // 2}" y="18" text-anchor="middle" font-size="13">{escape(title)}</text>')
    for k, bars, top, h in panels:
        color = COLORS[k % len(COLORS)]
        out.append(f'<g class="panel" data-dim="{k}">')
        out.append(f'<text x="6" y="{_c(top + 14)}">H{k}</text>')
        out.append(f'<rect x="{MARGIN_LEFT}" y="{_c(top)}" width="{plot_w}" height="{_c(h - 4)}" '
                   'fill="none" stroke="#cccccc"/>')
        for i, iv in enumerate(bars):
            by = top + PANEL_PAD - 8 + BAR_GAP * i
            x0, x1 = sx(iv.birth), sx(iv.death)
            marker = ' marker-end="url(#arrow)"' if math.isinf(iv.death) else ""
            out.append(f'<line class="bar" x1="{_c(x0)}" y1="{_c(by)}" x2="{_c(x1)}" y2="{_c(by)}" '
                       f'stroke="{color}" stroke-width="4"{marker}/>')
        out.append("</g>")
    out.append(f'<line x1="{MARGIN_LEFT}" y1="{_c(axis_y)}" x2="{WIDTH - MARGIN_RIGHT}" '
               f'y2="{_c(axis_y)}" stroke="black"/>')
    for t in _ticks(hi):
        tx = sx(t)
        out.append(f'<line x1="{_c(tx)}" y1="{_c(axis_y)}" x2="{_c(tx)}" y2="{_c(axis_y + 4)}" stroke="black"/>')
        out.append(f'<text x="{_c(tx)}" y="{_c(axis_y + 16)}" text-anchor="middle">{_tick_label(t)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
