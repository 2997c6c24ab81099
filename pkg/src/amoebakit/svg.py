"""Minimal SVG writer for rasters, corner loci and subdivisions.

Coordinates run x right and y up; one unit maps to ``scale`` pixels.
"""

from __future__ import annotations

from typing import Iterable, Sequence
from xml.sax.saxutils import escape

import numpy as np

from .amoeba import AmoebaRaster, Box2D, ComplementComponent
from .tropical import PolyhedralComplex, Subdivision

DEFAULT_SCALE = 64.0
AMOEBA_FILL = "#3b6ea5"
HOLE_FILL = "#f2a541"
SPINE_STROKE = "#c0392b"


def _n(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class _Canvas:
    def __init__(self, box: Box2D, scale: float, pad: float = 8.0):
        self.box, self.scale, self.pad = box, scale, pad
        self.items: list[str] = []

    def xy(self, x: float, y: float) -> tuple[str, str]:
        return (
            _n(self.pad + (x - self.box.min[0]) * self.scale),
            _n(self.pad + (self.box.max[1] - y) * self.scale),
        )

    def rect(self, x0: float, y0: float, x1: float, y1: float, fill: str) -> None:
        sx, sy = self.xy(x0, y1)
        w, h = _n((x1 - x0) * self.scale), _n((y1 - y0) * self.scale)
        self.items.append(f'<rect x="{sx}" y="{sy}" width="{w}" height="{h}" fill="{fill}"/>')

    def line(self, p: Sequence[float], q: Sequence[float], stroke: str, width: float = 1.5) -> None:
        (x1, y1), (x2, y2) = self.xy(*p), self.xy(*q)
        self.items.append(
            f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{stroke}" stroke-width="{_n(width)}"/>'
        )

    def polygon(self, pts: Iterable[Sequence[float]], fill: str, stroke: str) -> None:
        coords = " ".join(",".join(self.xy(*p)) for p in pts)
        self.items.append(f'<polygon points="{coords}" fill="{fill}" stroke="{stroke}" stroke-width="1.5"/>')

    def circle(self, p: Sequence[float], r: float, fill: str) -> None:
        cx, cy = self.xy(*p)
        self.items.append(f'<circle cx="{cx}" cy="{cy}" r="{_n(r)}" fill="{fill}"/>')

    def text(self, p: Sequence[float], label: str, size: int = 11) -> None:
        x, y = self.xy(*p)
        self.items.append(f'<text x="{x}" y="{y}" font-size="{size}" font-family="monospace">{escape(label)}</text>')

    def render(self, title: str = "") -> str:
        w = _n(2 * self.pad + self.box.width * self.scale)
        h = _n(2 * self.pad + self.box.height * self.scale)
        head = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        ]
        if title:
            head.append(f"<title>{escape(title)}</title>")
        head.append(f'<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>')
        return "\n".join(head + self.items + ["</svg>", ""])


def _column_runs(mask: np.ndarray):
    """Yield ``(i, j0, j1)`` runs of True along each column of ``mask[i, j]``."""
    for i in range(mask.shape[0]):
        col = np.concatenate([[False], mask[i], [False]]).astype(np.int8)
        edges = np.flatnonzero(np.diff(col))
        for a, b in zip(edges[::2], edges[1::2]):
            yield i, int(a), int(b)


def _clip_ray(start, direction, box: Box2D):
    d = np.asarray(direction, dtype=float)
    d /= np.linalg.norm(d)
    reach = 2.0 * (box.width + box.height)
    return tuple(start), tuple(np.asarray(start) + reach * d)


def _draw_complex(canvas: _Canvas, gamma: PolyhedralComplex, stroke: str) -> None:
    for a, b in gamma.edges:
        canvas.line(gamma.vertices[a], gamma.vertices[b], stroke)
    for v, d in gamma.rays:
        canvas.line(*_clip_ray(gamma.vertices[v], d, canvas.box), stroke)
    for v in gamma.vertices:
        canvas.circle(v, 2.5, stroke)


def raster_svg(
    raster: AmoebaRaster,
    components: Sequence[ComplementComponent] = (),
    spine: PolyhedralComplex | None = None,
    scale: float = DEFAULT_SCALE,
    title: str = "",
) -> str:
    """Amoeba pixels in one fill, bounded complement components highlighted."""
    canvas = _Canvas(raster.box, scale)
    dx, dy = raster.pixel_size
    x0, y0 = raster.box.min

    def paint(mask: np.ndarray, fill: str) -> None:
        for i, a, b in _column_runs(mask):
            canvas.rect(x0 + i * dx, y0 + a * dy, x0 + (i + 1) * dx, y0 + b * dy, fill)

    paint(raster.in_amoeba, AMOEBA_FILL)
    for comp in components:
        if comp.bounded:
            mask = np.zeros(raster.resolution, dtype=bool)
            mask[comp.pixels[:, 0], comp.pixels[:, 1]] = True
            paint(mask, HOLE_FILL)
    for comp in components:
        if comp.order is not None:
            canvas.text(comp.witness_point, str(tuple(comp.order)))
    if spine is not None:
        canvas.items.append('<svg x="0" y="0" overflow="hidden">')
        _draw_complex(canvas, spine, SPINE_STROKE)
        canvas.items.append("</svg>")
    return canvas.render(title)


def complex_svg(gamma: PolyhedralComplex, box: Box2D | None = None, scale: float = DEFAULT_SCALE,
                title: str = "") -> str:
    if box is None:
        lo, hi = gamma.vertex_bbox()
        box = Box2D((lo[0] - 2, lo[1] - 2), (hi[0] + 2, hi[1] + 2))
    canvas = _Canvas(box, scale)
    canvas.items.append('<svg x="0" y="0" overflow="hidden">')
    _draw_complex(canvas, gamma, SPINE_STROKE)
    canvas.items.append("</svg>")
    return canvas.render(title)


def subdivision_svg(sub: Subdivision, scale: float = DEFAULT_SCALE, title: str = "") -> str:
    """Cells of a subdivision of the Newton polygon, drawn in exponent space."""
    pts = np.array([v for cell in sub.cells for v in cell], dtype=float)
    lo, hi = pts.min(axis=0) - 0.5, pts.max(axis=0) + 0.5
    canvas = _Canvas(Box2D(tuple(lo), tuple(hi)), scale)
    for cell in sub.cells:
        canvas.polygon(cell, "#e8eef6", "#2c3e50")
    for v in sorted(sub.vertex_set):
        canvas.circle(v, 3.5, "#2c3e50")
    return canvas.render(title)


__all__ = ["complex_svg", "raster_svg", "subdivision_svg"]
