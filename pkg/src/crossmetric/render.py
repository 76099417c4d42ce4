"""Deterministic SVG drawings of planar instances and spanning forests."""
from __future__ import annotations

from xml.sax.saxutils import escape

from .arrangement import build_arrangement
from .errors import DimensionUnsupported
from .forest import SpanningForest
from .geometry import Instance

SIZE = 600
MARGIN = 20


def _box(inst: Instance) -> tuple[float, float, float, float]:
    if not inst.points:
        return 0.0, 0.0, 1.0, 1.0
    xs = [p[0] for p in inst.points]
    ys = [p[1] for p in inst.points]
    pad = max(1.0, 0.1 * max(max(xs) - min(xs), max(ys) - min(ys)))
    return min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad


def clip_line(a: int, b: int, c: int, box) -> tuple[tuple[float, float], tuple[float, float]] | None:
    """Segment of ``a x + b y + c = 0`` inside ``box``, or None if it misses."""
    x0, y0, x1, y1 = box
    pts = []
    if b != 0:
        for x in (x0, x1):
            y = -(a * x + c) / b
            if y0 <= y <= y1:
                pts.append((x, y))
    if a != 0:
        for y in (y0, y1):
            x = -(b * y + c) / a
            if x0 <= x <= x1:
                pts.append((x, y))
    pts = sorted(set(pts))
    if len(pts) < 2:
        return None
    return pts[0], pts[-1]


def render_svg(inst: Instance, forest: SpanningForest | None = None) -> str:
    if inst.dim != 2:
        raise DimensionUnsupported("only planar instances can be drawn")
    box = _box(inst)
    x0, y0, x1, y1 = box
    scale = (SIZE - 2 * MARGIN) / max(x1 - x0, y1 - y0)

    def sx(x: float) -> str:
        return f"{MARGIN + (x - x0) * scale:.2f}"

    def sy(y: float) -> str:
        return f"{SIZE - MARGIN - (y - y0) * scale:.2f}"

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        f'<rect class="frame" x="{MARGIN}" y="{MARGIN}" width="{SIZE - 2 * MARGIN}" height="{SIZE - 2 * MARGIN}" fill="white" stroke="black"/>',
    ]
    for h in inst.hyperplanes:
        seg = clip_line(int(h.normal[0]), int(h.normal[1]), int(h.offset), box)
        if seg:
            (ax, ay), (bx, by) = seg
            out.append(f'<line class="hyperplane" x1="{sx(ax)}" y1="{sy(ay)}" x2="{sx(bx)}" y2="{sy(by)}" stroke="gray" stroke-width="1"/>')
    if forest is not None:
        for a, b, _ in sorted(forest.edges):
            (ax, ay), (bx, by) = inst.points[a], inst.points[b]
            out.append(f'<line class="edge" x1="{sx(ax)}" y1="{sy(ay)}" x2="{sx(bx)}" y2="{sy(by)}" stroke="red" stroke-width="2"/>')
    for x, y in inst.points:
        out.append(f'<circle class="point" cx="{sx(x)}" cy="{sy(y)}" r="3" fill="black"/>')
    faces = build_arrangement(inst, range(inst.m)).n_faces
    legend = f"{inst.n} points, {inst.m} lines, {faces} faces"
    if forest is not None:
        legend += f", forest weight {forest.weight}"
    out.append(f'<text class="legend" x="{MARGIN}" y="{MARGIN - 6}" font-family="monospace" font-size="12">{escape(legend)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
