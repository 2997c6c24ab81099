"""Exact Newton polytope combinatorics.

Everything here runs on Python integers, so hull predicates are exact and
cannot overflow.  Vertex tests in dimension >= 3 go through a small linear
program; lattice-point enumeration is implemented for the plane only.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull

from .laurent import Exponent, LaurentPolynomial


class DegenerateHullError(ValueError):
    """The convex hull is not full-dimensional."""


class PointClass(str, enum.Enum):
    VERTEX = "Vertex"
    BOUNDARY = "BoundaryNonVertex"
    INTERIOR = "Interior"
    OUTSIDE = "Outside"


class Regime(str, enum.Enum):
    MAXIMALLY_SPARSE = "MaximallySparse"
    BOUNDARY_SUPPORTED = "BoundarySupported"
    INTERIOR_SUPPORTED = "InteriorSupported"


@dataclass(frozen=True)
class NewtonPolytope:
    """A full-dimensional lattice polytope.

    ``facets`` holds ``(normal, offset)`` pairs with primitive integer outward
    normals, so the polytope is ``{p : <normal, p> <= offset for every facet}``.
    In the plane the vertices are listed counterclockwise and the i-th facet is
    the edge from ``vertices[i]`` to ``vertices[i+1]``.
    """

    dim: int
    vertices: tuple[Exponent, ...]
    facets: tuple[tuple[Exponent, int], ...]

    def facet_slacks(self, p: Sequence[int]) -> list[int]:
        return [off - sum(a * b for a, b in zip(nrm, p)) for nrm, off in self.facets]

    def classify(self, p: Sequence[int]) -> PointClass:
        p = tuple(int(v) for v in p)
        slacks = self.facet_slacks(p)
        if min(slacks) < 0:
            return PointClass.OUTSIDE
        if p in self.vertices:
            return PointClass.VERTEX
        if 0 in slacks:
            return PointClass.BOUNDARY
        return PointClass.INTERIOR

    def contains(self, p: Sequence[int]) -> bool:
        return self.classify(p) is not PointClass.OUTSIDE

    def edges(self) -> list[tuple[Exponent, Exponent]]:
        if self.dim != 2:
            raise ValueError("edges are only listed for polygons")
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def to_dict(self, with_lattice_points: bool = True) -> dict:
        out = {
            "dim": self.dim,
            "vertices": [list(v) for v in self.vertices],
            "facets": [{"normal": list(n), "offset": off} for n, off in self.facets],
        }
        if with_lattice_points and self.dim == 2:
            out["lattice_points"] = [
                {"point": list(p), "class": c.value} for p, c in lattice_points(self)
            ]
        return out


def _cross(o: Exponent, a: Exponent, b: Exponent) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull_2d(points: Iterable[Sequence[int]]) -> list[Exponent]:
    """Counterclockwise extreme points (collinear points dropped).

    Returns fewer than three points when the input is collinear.
    """
    pts = sorted({(int(p[0]), int(p[1])) for p in points})
    if len(pts) <= 2:
        return pts
    lower: list[Exponent] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Exponent] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        return [pts[0], pts[-1]]
    return hull


def _primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for c in v:
        g = math.gcd(g, int(c))
    return tuple(int(c) // g for c in v) if g else tuple(int(c) for c in v)


def _det(m: list[list[int]]) -> int:
    """Bareiss fraction-free determinant of a square integer matrix."""
    a = [row[:] for row in m]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1] if n else 1


def _rank(rows: list[list[int]]) -> int:
    if not rows:
        return 0
    return int(np.linalg.matrix_rank(np.array(rows, dtype=float)))


def _in_hull_lp(p: Sequence[int], others: Sequence[Sequence[int]]) -> bool:
    """LP feasibility of ``p = sum lambda_i q_i`` with ``lambda`` in the simplex."""
    if not others:
        return False
    q = np.array(others, dtype=float).T
    a_eq = np.vstack([q, np.ones(q.shape[1])])
    b_eq = np.append(np.asarray(p, dtype=float), 1.0)
    res = linprog(np.zeros(q.shape[1]), A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    return res.status == 0


def _facets_nd(verts: list[Exponent]) -> list[tuple[Exponent, int]]:
    n = len(verts[0])
    hull = ConvexHull(np.array(verts, dtype=float))
    facets: dict[tuple[Exponent, int], None] = {}
    for simplex in hull.simplices:
        base = verts[simplex[0]]
        diffs = [[verts[s][k] - base[k] for k in range(n)] for s in simplex[1:]]
        normal = []
        for col in range(n):
            minor = [[row[c] for c in range(n) if c != col] for row in diffs]
            normal.append((-1) ** col * _det(minor))
        normal = list(_primitive(normal))
        off = sum(a * b for a, b in zip(normal, base))
        if any(sum(a * b for a, b in zip(normal, v)) > off for v in verts):
            normal = [-c for c in normal]
            off = -off
        facets[(tuple(normal), off)] = None
    return list(facets)


def convex_hull(points: Iterable[Sequence[int]]) -> NewtonPolytope:
    pts = sorted({tuple(int(c) for c in p) for p in points})
    if not pts:
        raise ValueError("empty point set")
    n = len(pts[0])
    if any(len(p) != n for p in pts):
        raise ValueError("points of mixed dimension")
    if n == 1:
        lo, hi = pts[0][0], pts[-1][0]
        if lo == hi:
            raise DegenerateHullError("hull is a single point")
        return NewtonPolytope(1, ((lo,), (hi,)), (((-1,), -lo), ((1,), hi)))
    if n == 2:
        verts = hull_2d(pts)
        if len(verts) < 3:
            raise DegenerateHullError("points are collinear; hull is not full-dimensional")
        facets = []
        for i, a in enumerate(verts):
            b = verts[(i + 1) % len(verts)]
            normal = _primitive((b[1] - a[1], a[0] - b[0]))
            facets.append((normal, normal[0] * a[0] + normal[1] * a[1]))
        return NewtonPolytope(2, tuple(verts), tuple(facets))
    base = pts[0]
    if _rank([[p[k] - base[k] for k in range(n)] for p in pts[1:]]) < n:
        raise DegenerateHullError(f"hull is not {n}-dimensional")
    verts = [p for i, p in enumerate(pts) if not _in_hull_lp(p, pts[:i] + pts[i + 1:])]
    return NewtonPolytope(n, tuple(verts), tuple(_facets_nd(verts)))


def lattice_points(poly: NewtonPolytope) -> list[tuple[Exponent, PointClass]]:
    """All lattice points of a polygon, row by row, with their classification."""
    if poly.dim != 2:
        raise ValueError(f"lattice point enumeration needs dim 2, got {poly.dim}")
    ys = [v[1] for v in poly.vertices]
    xs = [v[0] for v in poly.vertices]
    out = []
    for y in range(min(ys), max(ys) + 1):
        lo, hi = min(xs), max(xs)
        for (a, b), c in poly.facets:
            rhs = c - b * y
            if a > 0:
                hi = min(hi, rhs // a)
            elif a < 0:
                lo = max(lo, -(rhs // -a))
            elif rhs < 0:
                lo, hi = 1, 0
        for x in range(lo, hi + 1):
            out.append(((x, y), poly.classify((x, y))))
    return out


def newton_polytope(f: LaurentPolynomial) -> NewtonPolytope:
    return convex_hull(f.support)


def is_maximally_sparse(f: LaurentPolynomial) -> bool:
    poly = newton_polytope(f)
    return set(f.support) == set(poly.vertices)


def classify_regime(f: LaurentPolynomial) -> Regime:
    poly = newton_polytope(f)
    classes = [poly.classify(p) for p in f.support]
    if all(c is PointClass.VERTEX for c in classes):
        return Regime.MAXIMALLY_SPARSE
    if PointClass.INTERIOR not in classes:
        return Regime.BOUNDARY_SUPPORTED
    return Regime.INTERIOR_SUPPORTED


def interior_points(poly: NewtonPolytope) -> list[Exponent]:
    return [p for p, c in lattice_points(poly) if c is PointClass.INTERIOR]


__all__ = [
    "DegenerateHullError",
    "NewtonPolytope",
    "PointClass",
    "Regime",
    "classify_regime",
    "convex_hull",
    "hull_2d",
    "interior_points",
    "is_maximally_sparse",
    "lattice_points",
    "newton_polytope",
]
