"""Plain-text SVG for packings and structured packings."""
from __future__ import annotations

from xml.sax.saxutils import escape

__all__ = ["render_svg"]

_FILLS = ["#8ecae6", "#ffb703", "#90be6d", "#f28482", "#cdb4db", "#f6bd60", "#84a59d", "#bde0fe"]
_LINES = ["#d62828", "#1d3557", "#2a9d8f", "#6a4c93", "#e76f51"]


def render_svg(box, packing, polylines=(), scale=40, margin=10, polyline_grid=2):
    """SVG text. Polylines are given on a grid ``polyline_grid`` times finer than the box."""
    W, H = box.n1 * scale, box.n2 * scale
    flip = lambda y: margin + H - y  # noqa: E731  (svg y grows downwards)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W + 2 * margin}" '
           f'height="{H + 2 * margin}" viewBox="0 0 {W + 2 * margin} {H + 2 * margin}">',
           f'<rect x="{margin}" y="{margin}" width="{W}" height="{H}" fill="white" '
           f'stroke="black" stroke-width="2"/>']
    for n, (iid, q) in enumerate(packing):
        x, y = margin + q.x * scale, flip(q.y2 * scale)
        out.append(f'<rect x="{x}" y="{y}" width="{q.w * scale}" height="{q.h * scale}" '
                   f'fill="{_FILLS[n % len(_FILLS)]}" stroke="#333" stroke-width="1"/>')
        cx, cy = x + q.w * scale / 2, y + q.h * scale / 2
        out.append(f'<text x="{cx}" y="{cy}" font-size="{max(8, scale // 3)}" '
                   f'text-anchor="middle" dominant-baseline="middle">{escape(str(iid))}</text>')
    for n, p in enumerate(polylines):
        pts = " ".join(f"{margin + x * scale / polyline_grid},{flip(y * scale / polyline_grid)}"
                       for x, y in p.breakpoints)
        out.append(f'<polyline points="{pts}" fill="none" stroke="{_LINES[n % len(_LINES)]}" '
                   f'stroke-width="3" stroke-opacity="0.8"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
