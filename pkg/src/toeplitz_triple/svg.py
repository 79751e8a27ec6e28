"""Minimal self-contained SVG line/scatter plots.

Hand-rolled on purpose: the reports need a handful of deterministic charts
(eigenvalue ladders, norm curves, partial-sum curves) with zero runtime
dependencies, not a plotting stack.
"""

from __future__ import annotations

import math

WIDTH = 640
HEIGHT = 420
MARGIN_LEFT = 70
MARGIN_RIGHT = 20
MARGIN_TOP = 40
MARGIN_BOTTOM = 50

COLORS = ["#1f6fb2", "#c23b22", "#2e8b57", "#8a2be2", "#b8860b", "#444444"]


def _transforms(xs, ys, logx, logy):
    fx = math.log10 if logx else (lambda v: v)
    fy = math.log10 if logy else (lambda v: v)
    txs = [fx(x) for x in xs]
    tys = [fy(y) for y in ys]
    x0, x1 = min(txs), max(txs)
    y0, y1 = min(tys), max(tys)
    if x1 - x0 < 1e-300:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 - y0 < 1e-300:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pad_y = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad_y, y1 + pad_y

    def to_px(x, y):
        px = MARGIN_LEFT + (fx(x) - x0) / (x1 - x0) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
        py = HEIGHT - MARGIN_BOTTOM - (fy(y) - y0) / (y1 - y0) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
        return px, py

    return to_px, (x0, x1, y0, y1), (fx, fy)


def _ticks(lo, hi, count=5):
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def _fmt(v):
    return f"{v:.4g}"


def chart(series, title="", xlabel="", ylabel="", logx=False, logy=False,
          scatter=False) -> str:
    """Render named (x, y) series to an SVG string.

    ``series`` is a list of (label, xs, ys).  Log axes drop nonpositive
    points.  Deterministic output: same input, same bytes.
    """
    cleaned = []
    for label, xs, ys in series:
        pts = [(float(x), float(y)) for x, y in zip(xs, ys)
               if (not logx or x > 0) and (not logy or y > 0)]
        if pts:
            cleaned.append((label, pts))
    if not cleaned:
        cleaned = [("empty", [(0.0, 0.0), (1.0, 1.0)])]

    all_x = [p[0] for _, pts in cleaned for p in pts]
    all_y = [p[1] for _, pts in cleaned for p in pts]
    to_px, (x0, x1, y0, y1), (fx, fy) = _transforms(all_x, all_y, logx, logy)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" '
        f'font-family="sans-serif" font-size="15">{title}</text>',
    ]
    # axes frame
    parts.append(
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" '
        f'width="{WIDTH - MARGIN_LEFT - MARGIN_RIGHT}" '
        f'height="{HEIGHT - MARGIN_TOP - MARGIN_BOTTOM}" '
        f'fill="none" stroke="#333" stroke-width="1"/>')
    # ticks
    for tx in _ticks(x0, x1):
        px = MARGIN_LEFT + (tx - x0) / (x1 - x0) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
        label = _fmt(10 ** tx if logx else tx)
        parts.append(f'<line x1="{px:.1f}" y1="{HEIGHT - MARGIN_BOTTOM}" '
                     f'x2="{px:.1f}" y2="{HEIGHT - MARGIN_BOTTOM + 5}" stroke="#333"/>')
        parts.append(f'<text x="{px:.1f}" y="{HEIGHT - MARGIN_BOTTOM + 18}" '
                     f'text-anchor="middle" font-family="sans-serif" '
                     f'font-size="11">{label}</text>')
    for ty in _ticks(y0, y1):
        py = HEIGHT - MARGIN_BOTTOM - (ty - y0) / (y1 - y0) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
        label = _fmt(10 ** ty if logy else ty)
        parts.append(f'<line x1="{MARGIN_LEFT - 5}" y1="{py:.1f}" '
                     f'x2="{MARGIN_LEFT}" y2="{py:.1f}" stroke="#333"/>')
        parts.append(f'<text x="{MARGIN_LEFT - 8}" y="{py + 4:.1f}" '
                     f'text-anchor="end" font-family="sans-serif" '
                     f'font-size="11">{label}</text>')
    # axis labels
    parts.append(f'<text x="{(MARGIN_LEFT + WIDTH - MARGIN_RIGHT) / 2:.1f}" '
                 f'y="{HEIGHT - 12}" text-anchor="middle" '
                 f'font-family="sans-serif" font-size="12">{xlabel}</text>')
    parts.append(f'<text x="16" y="{(MARGIN_TOP + HEIGHT - MARGIN_BOTTOM) / 2:.1f}" '
                 f'text-anchor="middle" font-family="sans-serif" font-size="12" '
                 f'transform="rotate(-90 16 {(MARGIN_TOP + HEIGHT - MARGIN_BOTTOM) / 2:.1f})"'
                 f'>{ylabel}</text>')

    for i, (label, pts) in enumerate(cleaned):
        color = COLORS[i % len(COLORS)]
        pixels = [to_px(x, y) for x, y in pts]
        if scatter or len(pixels) == 1:
            for px, py in pixels:
                parts.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="2.5" '
                             f'fill="{color}"/>')
        else:
            path = " ".join(f"{px:.2f},{py:.2f}" for px, py in pixels)
            parts.append(f'<polyline points="{path}" fill="none" '
                         f'stroke="{color}" stroke-width="1.5"/>')
        # legend
        ly = MARGIN_TOP + 16 + 16 * i
        parts.append(f'<rect x="{WIDTH - 170}" y="{ly - 9}" width="10" height="10" '
                     f'fill="{color}"/>')
        parts.append(f'<text x="{WIDTH - 155}" y="{ly}" font-family="sans-serif" '
                     f'font-size="11">{label}</text>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
