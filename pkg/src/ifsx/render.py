"""SVG pictures of depth-k cylinders, coloured by first-level component."""
from __future__ import annotations

from xml.sax.saxutils import escape

from . import scalar as sc
from .attractor import Budget, refine_cover
from .core import IFS
from .errors import UnsupportedDimension
from .separation import partition

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")
WIDTH = 800
MARGIN = 20
BAR_HEIGHT = 40


def _num(x: float) -> str:
    return f"{x:.4f}".rstrip("0").rstrip(".")


def _colours(ifs: IFS, budget) -> list:
    part = partition(ifs, budget)
    colour = {}
    for n, comp in enumerate(part.components):
        for i in comp:
            colour[i] = PALETTE[n % len(PALETTE)]
    return colour


def render_svg(ifs: IFS, depth: int, out=None, budget=None) -> str:
    """SVG text for the depth-``depth`` cylinders; written to ``out`` when given."""
    if ifs.dimension > 2:
        raise UnsupportedDimension(f"cannot render dimension {ifs.dimension}")
    budget = Budget.coerce(budget)
    cover = refine_cover(ifs, depth, budget)
    colour = _colours(ifs, budget)
    boxes = [(w, [float(sc.midpoint(c)) for c in b.center], float(b.radius)) for w, b in cover.entries]
    d = ifs.dimension
    lows = [min(c[k] - r for _, c, r in boxes) for k in range(d)]
    highs = [max(c[k] + r for _, c, r in boxes) for k in range(d)]
    span = max(h - l for l, h in zip(lows, highs)) or 1.0
    scale = (WIDTH - 2 * MARGIN) / span
    height = BAR_HEIGHT + 2 * MARGIN if d == 1 else int(round((highs[1] - lows[1]) * scale)) + 2 * MARGIN
    title = escape(ifs.name or "IFS")
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{height}" '
        f'viewBox="0 0 {WIDTH} {height}">',
        f"<title>{title}, depth {depth}</title>",
    ]
    for w, c, r in boxes:
        fill = colour[w[0]]
        word = ".".join(map(str, w))
        if d == 1:
            x = MARGIN + (c[0] - r - lows[0]) * scale
            lines.append(f'<rect class="bar" data-word="{word}" x="{_num(x)}" y="{MARGIN}" '
                         f'width="{_num(max(2 * r * scale, 0.5))}" height="{BAR_HEIGHT}" fill="{fill}"/>')
        else:
            x = MARGIN + (c[0] - lows[0]) * scale
            y = height - MARGIN - (c[1] - lows[1]) * scale
            lines.append(f'<circle class="disk" data-word="{word}" cx="{_num(x)}" cy="{_num(y)}" '
                         f'r="{_num(max(r * scale, 0.5))}" fill="{fill}" fill-opacity="0.6"/>')
    lines.append("</svg>")
    text = "\n".join(lines) + "\n"
    if out is not None:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
