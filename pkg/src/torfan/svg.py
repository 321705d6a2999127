"""Static SVG pictures of fans and complexes in dimension at most two.

All geometry is exact; coordinates are rounded to hundredths only when the
SVG text is written, so output is byte-for-byte reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cmp_to_key
from math import ceil
from pathlib import Path
from typing import Union

from .cli_io import fmt_q
from .errors import DimensionError
from .fans import Fan, PolyhedralComplex
from .polyhedra import Polyhedron

SIZE = 400
MARGIN = 20
PALETTE = ("#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5")


def _num(q: Fraction) -> str:
    i = round(Fraction(q) * 100)
    sign = "-" if i < 0 else ""
    i = abs(i)
    return f"{sign}{i // 100}.{i % 100:02d}"


def _vec(v) -> str:
    return "(" + ",".join(fmt_q(x) for x in v) + ")"


def _label(cell: Polyhedron, is_fan: bool) -> str:
    if is_fan:
        parts = [_vec(r) for r in cell.rays] + ["±" + _vec(l) for l in cell.lineality]
        return " ".join(parts) if parts else "{0}"
    parts = [_vec(v) for v in cell.vertices] + ["+" + _vec(r) for r in cell.rays]
    parts += ["±" + _vec(l) for l in cell.lineality]
    return " ".join(parts)


def _box_radius(K: PolyhedralComplex) -> Fraction:
    if isinstance(K, Fan):
        return Fraction(1)
    m = max((abs(x) for c in K.maximal_cells for v in c.vertices for x in v), default=Fraction(0))
    return Fraction(max(1, ceil(m)) + 1)


class _Canvas:
    def __init__(self, R: Fraction):
        self.R = R
        self.scale = Fraction(SIZE - 2 * MARGIN, 2) / R
        self.items: list[str] = []

    def x(self, u) -> str:
        return _num(Fraction(SIZE, 2) + Fraction(u) * self.scale)

    def y(self, v) -> str:
        return _num(Fraction(SIZE, 2) - Fraction(v) * self.scale)

    def text(self, x, y, s):
        s = s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
        self.items.append(f'<text x="{x}" y="{y}" font-size="10" text-anchor="middle">{s}</text>')

    def render(self) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
                f'viewBox="0 0 {SIZE} {SIZE}">')
        bg = f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>'
        return "\n".join([head, bg] + self.items + ["</svg>"]) + "\n"


def _cyclic(points: list[tuple]) -> list[tuple]:
    """Vertices of a convex polygon in counterclockwise order (exact)."""
    k = len(points)
    cx = sum((p[0] for p in points), Fraction(0)) / k
    cy = sum((p[1] for p in points), Fraction(0)) / k

    def half(p):
        dx, dy = p[0] - cx, p[1] - cy
        return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1

    def cmp(p, q):
        hp, hq = half(p), half(q)
        if hp != hq:
            return hp - hq
        cross = (p[0] - cx) * (q[1] - cy) - (p[1] - cy) * (q[0] - cx)
        return -1 if cross > 0 else (1 if cross < 0 else 0)

    return sorted(points, key=cmp_to_key(cmp))


def _clip(cell: Polyhedron, R: Fraction) -> Polyhedron:
    n = cell.n
    A, b = [], []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        A.append(tuple(e))
        b.append(-R)
        A.append(tuple(-x for x in e))
        b.append(-R)
    return cell.add_constraints(A, b)


def _draw_2d(canvas: _Canvas, K: PolyhedralComplex, is_fan: bool):
    R = canvas.R
    for idx, cell in enumerate(K.maximal_cells):
        color = PALETTE[idx % len(PALETTE)]
        clipped = _clip(cell, R)
        if clipped.is_empty:
            continue
        pts = [tuple(v) for v in clipped.vertices]
        if clipped.dim == 2:
            ring = _cyclic(pts)
            coords = " ".join(f"{canvas.x(p[0])},{canvas.y(p[1])}" for p in ring)
            canvas.items.append(f'<polygon points="{coords}" fill="{color}" fill-opacity="0.7" '
                                f'stroke="black" stroke-width="1"/>')
        elif clipped.dim == 1:
            p, q = sorted(pts)[0], sorted(pts)[-1]
            canvas.items.append(f'<line x1="{canvas.x(p[0])}" y1="{canvas.y(p[1])}" x2="{canvas.x(q[0])}" '
                                f'y2="{canvas.y(q[1])}" stroke="{color}" stroke-width="4"/>')
        else:
            p = pts[0]
            canvas.items.append(f'<circle cx="{canvas.x(p[0])}" cy="{canvas.y(p[1])}" r="4" fill="{color}"/>')
        k = len(pts)
        cx = sum((p[0] for p in pts), Fraction(0)) / k
        cy = sum((p[1] for p in pts), Fraction(0)) / k
        canvas.text(canvas.x(cx), canvas.y(cy), _label(cell, is_fan))


def _draw_1d(canvas: _Canvas, K: PolyhedralComplex, is_fan: bool):
    R = canvas.R
    mid = Fraction(SIZE, 2)
    canvas.items.append(f'<line x1="{_num(Fraction(MARGIN))}" y1="{_num(mid)}" x2="{_num(Fraction(SIZE - MARGIN))}" '
                        f'y2="{_num(mid)}" stroke="black" stroke-width="1"/>')
    walls = set()
    for idx, cell in enumerate(K.maximal_cells):
        color = PALETTE[idx % len(PALETTE)]
        clipped = _clip(cell, R)
        xs = sorted(v[0] for v in clipped.vertices)
        lo, hi = xs[0], xs[-1]
        x0 = canvas.x(lo)
        width = _num((hi - lo) * canvas.scale)
        canvas.items.append(f'<rect x="{x0}" y="{_num(mid - 6)}" width="{width}" height="12" '
                            f'fill="{color}" fill-opacity="0.8" stroke="black" stroke-width="1"/>')
        canvas.text(canvas.x((lo + hi) / 2), _num(mid - 14), _label(cell, is_fan))
        for v in cell.vertices:
            walls.add(v[0])
    for w in sorted(walls):
        canvas.items.append(f'<line x1="{canvas.x(w)}" y1="{_num(mid - 20)}" x2="{canvas.x(w)}" '
                            f'y2="{_num(mid + 20)}" stroke="black" stroke-width="2"/>')
        canvas.text(canvas.x(w), _num(mid + 32), fmt_q(w))


def svg_text(K: PolyhedralComplex) -> str:
    if K.n > 2:
        raise DimensionError("SVG rendering only for ambient dimension ≤ 2")
    is_fan = isinstance(K, Fan) or K.is_fan
    canvas = _Canvas(_box_radius(K))
    if K.n == 2:
        _draw_2d(canvas, K, is_fan)
    elif K.n == 1:
        _draw_1d(canvas, K, is_fan)
    else:
        canvas.items.append(f'<circle cx="{SIZE // 2}" cy="{SIZE // 2}" r="4" fill="black"/>')
    return canvas.render()


def render_svg(K: PolyhedralComplex, path: Union[str, Path]) -> Path:
    """Write ``K`` as a standalone SVG file."""
    text = svg_text(K)
    path = Path(path)
    path.write_text(text, encoding="utf-8")
    return path
