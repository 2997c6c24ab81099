"""Independent brute-force oracles used by unit and acceptance tests."""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations

import numpy as np


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _on_segment(p, a, b):
    return _cross(a, b, p) == 0 and min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(
        a[1], b[1]
    ) <= p[1] <= max(a[1], b[1])


def in_closed_triangle(p, a, b, c):
    d1, d2, d3 = _cross(a, b, p), _cross(b, c, p), _cross(c, a, p)
    if _cross(a, b, c) == 0:
        return _on_segment(p, a, b) or _on_segment(p, b, c) or _on_segment(p, a, c)
    neg = d1 < 0 or d2 < 0 or d3 < 0
    pos = d1 > 0 or d2 > 0 or d3 > 0
    return not (neg and pos)


def extreme_points(pts):
    """Extreme points of a planar set by Caratheodory: not inside any triangle of the others."""
    pts = list(pts)
    out = []
    for p in pts:
        others = [q for q in pts if q != p]
        if len(others) < 1:
            out.append(p)
            continue
        trip = combinations(others, 3) if len(others) >= 3 else [tuple(others) + (others[-1],) * (3 - len(others))]
        if not any(in_closed_triangle(p, *t) for t in trip):
            out.append(p)
    return out


def lower_faces(heights: dict) -> list[frozenset]:
    """Contact sets of all lower facets of the lifted configuration (exact)."""
    pts = list(heights)
    h = {p: Fraction(heights[p]) for p in pts}
    faces = set()
    for a, b, c in combinations(pts, 3):
        det = _cross(a, b, c)
        if det == 0:
            continue
        # plane z = u*x + v*y + w through the three lifted points
        m = [[a[0], a[1], 1], [b[0], b[1], 1], [c[0], c[1], 1]]
        rhs = [h[a], h[b], h[c]]
        sol = _solve3(m, rhs)
        u, v, w = sol
        vals = {p: h[p] - (u * p[0] + v * p[1] + w) for p in pts}
        if all(val >= 0 for val in vals.values()):
            faces.add(frozenset(p for p, val in vals.items() if val == 0))
    return list(faces)


def _solve3(m, rhs):
    a = [[Fraction(x) for x in row] + [Fraction(r)] for row, r in zip(m, rhs)]
    for col in range(3):
        piv = next(r for r in range(col, 3) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        for r in range(3):
            if r != col and a[r][col] != 0:
                f = a[r][col] / a[col][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][3] / a[i][i] for i in range(3)]


def lower_hull_vertices(heights: dict) -> set:
    """Lifted points that are vertices of the lower hull."""
    out = set()
    for face in lower_faces(heights):
        out |= set(extreme_points(face))
    return out


def argmax_scan_threshold(x0, v, heights: dict, log_t: float, alpha1, s_max: float, step: float = 1e-3):
    """Smallest grid s after which alpha1 alone maximises <alpha, x0+s v> + nu log t."""
    pts = list(heights)
    E = np.array(pts, dtype=float)
    nu = np.array([float(heights[p]) for p in pts])
    s = np.arange(0.0, s_max + step, step)
    xs = np.asarray(x0, dtype=float)[None, :] + s[:, None] * np.asarray(v, dtype=float)[None, :]
    vals = xs @ E.T + nu * log_t
    k = pts.index(tuple(alpha1))
    others = np.delete(vals, k, axis=1)
    good = vals[:, k] > others.max(axis=1)
    bad = np.flatnonzero(~good)
    if len(bad) == 0:
        return 0.0
    if bad[-1] == len(s) - 1:
        return math.inf
    return float(s[bad[-1] + 1])
