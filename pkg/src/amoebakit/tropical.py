"""Tropical polynomials, regular subdivisions and planar corner loci.

Heights follow one convention throughout: a lifting stores ``nu(alpha)`` and
induces ``F(x) = max_alpha (<alpha, x> - nu(alpha))``.  A Ronkin constant
``c_alpha`` therefore enters as ``nu = -c``.

When every height is an ``int`` or ``Fraction`` the lower hull is computed in
exact rational arithmetic; float heights use the tolerance ``EPS_HULL``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from numbers import Rational
from typing import Iterable, Mapping, Sequence, Union

import numpy as np
from scipy.optimize import linprog

from .laurent import Exponent, LaurentPolynomial
from .polytope import DegenerateHullError, convex_hull, hull_2d

Height = Union[Fraction, float]

EPS_TIE = 1e-9
EPS_HULL = 1e-9
EPS_LP = 1e-9


def _as_height(v) -> Height:
    if isinstance(v, bool):
        raise TypeError("boolean height")
    if isinstance(v, Rational):
        return Fraction(v)
    return float(v)


class Lifting:
    """Support points with heights ``nu``; see the module docstring for the sign."""

    def __init__(self, heights: Mapping[Sequence[int], object]):
        if not heights:
            raise ValueError("a lifting needs at least one point")
        items = {tuple(int(c) for c in k): _as_height(v) for k, v in heights.items()}
        dims = {len(k) for k in items}
        if len(dims) != 1:
            raise ValueError("points of mixed dimension")
        self.dim = dims.pop()
        self.exact = all(isinstance(v, Fraction) for v in items.values())
        if not self.exact:
            items = {k: float(v) for k, v in items.items()}
        self._heights = dict(sorted(items.items()))

    @classmethod
    def from_coefficients(cls, f: LaurentPolynomial) -> "Lifting":
        """The coefficient lifting ``nu = -log|a_alpha|``."""
        return cls({e: -math.log(abs(c)) for e, c in f.terms})

    @property
    def heights(self) -> dict[Exponent, Height]:
        return dict(self._heights)

    @property
    def points(self) -> list[Exponent]:
        return list(self._heights)

    def __getitem__(self, alpha: Sequence[int]) -> Height:
        return self._heights[tuple(alpha)]

    def __contains__(self, alpha) -> bool:
        return tuple(alpha) in self._heights

    def __len__(self) -> int:
        return len(self._heights)

    def __eq__(self, other) -> bool:
        return isinstance(other, Lifting) and self._heights == other._heights

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {v}" for k, v in self._heights.items())
        return f"Lifting({{{body}}})"

    def scaled(self, s: float) -> "Lifting":
        return Lifting({k: v * s for k, v in self._heights.items()})

    def to_dict(self) -> dict:
        return {
            "points": [list(k) for k in self._heights],
            "heights": [float(v) for v in self._heights.values()],
        }


def _is_exact_vector(x) -> bool:
    return all(isinstance(v, Rational) and not isinstance(v, bool) for v in x)


def trop_eval(L: Lifting, x: Sequence) -> tuple[Height, set[Exponent]]:
    """Value of ``max(<alpha,x> - nu(alpha))`` and the (tolerant) argmax set."""
    if len(x) != L.dim:
        raise ValueError(f"x has dimension {len(x)}, lifting {L.dim}")
    if L.exact and _is_exact_vector(x):
        xs = [Fraction(v) for v in x]
        vals = {a: sum(ai * xi for ai, xi in zip(a, xs)) - h for a, h in L._heights.items()}
        top = max(vals.values())
        return top, {a for a, v in vals.items() if v == top}
    xs = [float(v) for v in x]
    vals = {a: sum(ai * xi for ai, xi in zip(a, xs)) - float(h) for a, h in L._heights.items()}
    top = max(vals.values())
    tol = EPS_TIE * max(1.0, abs(top))
    return top, {a for a, v in vals.items() if top - v <= tol}


def trop_eval_many(L: Lifting, xs: np.ndarray) -> np.ndarray:
    """Vectorised ``F`` on an array of points of shape (..., n)."""
    pts = np.array(L.points, dtype=float)
    h = np.array([float(v) for v in L._heights.values()])
    return (np.asarray(xs, dtype=float) @ pts.T - h).max(axis=-1)


# ----------------------------------------------------------------------------
# regular subdivisions


@dataclass(frozen=True)
class Subdivision:
    """Regular subdivision of a polygon.

    ``cells[i]`` lists the cell's vertices counterclockwise; ``slopes[i]`` is the
    gradient of the lower-hull facet above that cell, which is also the point of
    the corner locus dual to it.
    """

    cells: tuple[tuple[Exponent, ...], ...]
    slopes: tuple[tuple[Height, Height], ...] = field(repr=False)

    @property
    def vertex_set(self) -> set[Exponent]:
        return {v for cell in self.cells for v in cell}

    def cell_keys(self) -> set[frozenset]:
        return {frozenset(c) for c in self.cells}

    def edge_map(self) -> dict[frozenset, list[int]]:
        out: dict[frozenset, list[int]] = {}
        for i, cell in enumerate(self.cells):
            for k in range(len(cell)):
                e = frozenset((cell[k], cell[(k + 1) % len(cell)]))
                out.setdefault(e, []).append(i)
        return out

    def interior_edges(self) -> list[frozenset]:
        return [e for e, cs in self.edge_map().items() if len(cs) == 2]

    def boundary_edges(self) -> list[frozenset]:
        return [e for e, cs in self.edge_map().items() if len(cs) == 1]

    def same_cells(self, other: "Subdivision") -> bool:
        return self.cell_keys() == other.cell_keys()

    def to_dict(self) -> dict:
        return {
            "cells": [[list(v) for v in c] for c in self.cells],
            "vertices": sorted(list(v) for v in self.vertex_set),
        }


def _plane(p, q, r, hp, hq, hr):
    """Slope (a, b) and intercept of the plane through three lifted points."""
    d = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    dq, dr = hq - hp, hr - hp
    a = (dq * (r[1] - p[1]) - dr * (q[1] - p[1])) / d
    b = ((q[0] - p[0]) * dr - (r[0] - p[0]) * dq) / d
    return a, b, hp - a * p[0] - b * p[1]


def regular_subdivision(L: Lifting) -> Subdivision:
    """Project the lower faces of ``conv{(alpha, nu(alpha))}``."""
    if L.dim != 2:
        raise ValueError("regular subdivisions are implemented for the plane only")
    pts = L.points
    convex_hull(pts)  # raises DegenerateHullError
    hs = list(L._heights.values())
    faces: dict[frozenset, tuple] = {}

    if L.exact:
        for i, j, k in combinations(range(len(pts)), 3):
            p, q, r = pts[i], pts[j], pts[k]
            if (q[0] - p[0]) * (r[1] - p[1]) == (q[1] - p[1]) * (r[0] - p[0]):
                continue
            a, b, c = _plane(p, q, r, hs[i], hs[j], hs[k])
            res = [h - a * s[0] - b * s[1] - c for s, h in zip(pts, hs)]
            if min(res) < 0:
                continue
            contact = frozenset(s for s, v in zip(pts, res) if v == 0)
            faces.setdefault(contact, (a, b))
    else:
        P = np.array(pts, dtype=float)
        H = np.array(hs, dtype=float)
        scale = max(1.0, float(np.abs(H).max()), float(np.abs(P).max()))
        tol = EPS_HULL * scale
        tri = np.array(list(combinations(range(len(pts)), 3)))
        p, q, r = P[tri[:, 0]], P[tri[:, 1]], P[tri[:, 2]]
        d = (q[:, 0] - p[:, 0]) * (r[:, 1] - p[:, 1]) - (q[:, 1] - p[:, 1]) * (r[:, 0] - p[:, 0])
        ok = d != 0
        tri, p, q, r, d = tri[ok], p[ok], q[ok], r[ok], d[ok]
        hp, hq, hr = H[tri[:, 0]], H[tri[:, 1]], H[tri[:, 2]]
        dq, dr = hq - hp, hr - hp
        a = (dq * (r[:, 1] - p[:, 1]) - dr * (q[:, 1] - p[:, 1])) / d
        b = ((q[:, 0] - p[:, 0]) * dr - (r[:, 0] - p[:, 0]) * dq) / d
        c = hp - a * p[:, 0] - b * p[:, 1]
        res = H[None, :] - a[:, None] * P[None, :, 0] - b[:, None] * P[None, :, 1] - c[:, None]
        lower = res.min(axis=1) >= -tol
        for t in np.flatnonzero(lower):
            contact = frozenset(pts[s] for s in np.flatnonzero(res[t] <= tol))
            faces.setdefault(contact, (float(a[t]), float(b[t])))

    cells, slopes = [], []
    for contact, slope in faces.items():
        verts = tuple(hull_2d(contact))
        if len(verts) < 3:
            continue
        cells.append(verts)
        slopes.append(slope)
    order = sorted(range(len(cells)), key=lambda i: cells[i])
    return Subdivision(tuple(cells[i] for i in order), tuple(slopes[i] for i in order))


def is_subdivision_vertex(L: Lifting, alpha: Sequence[int]) -> bool:
    """Whether some ``x`` makes ``alpha`` the unique strict maximiser (LP test)."""
    alpha = tuple(alpha)
    if alpha not in L:
        raise KeyError(f"{alpha} is not a lifted point")
    others = [b for b in L.points if b != alpha]
    if not others:
        return True
    n = L.dim
    na = float(L[alpha])
    # variables (x, s): maximise s subject to <alpha - beta, x> - nu(alpha) + nu(beta) >= s
    a_ub = np.array([[-(ai - bi) for ai, bi in zip(alpha, beta)] + [1.0] for beta in others])
    b_ub = np.array([float(L[beta]) - na for beta in others])
    c = np.zeros(n + 1)
    c[-1] = -1.0
    bounds = [(None, None)] * n + [(None, 1.0)]
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if res.status != 0:
        return False
    scale = max(1.0, max(abs(float(h)) for h in L._heights.values()))
    return -res.fun > EPS_LP * scale


@dataclass(frozen=True)
class RedundancyCertificate:
    """``alpha = sum lambda_i beta_i`` with ``nu(alpha) >= sum lambda_i nu(beta_i)``."""

    points: tuple[Exponent, ...]
    weights: tuple[Height, ...]
    combined_height: Height
    strict: bool

    def to_dict(self) -> dict:
        return {
            "points": [list(p) for p in self.points],
            "weights": [float(w) for w in self.weights],
            "combined_height": float(self.combined_height),
            "strict": self.strict,
        }


def redundancy_criterion(L: Lifting, alpha: Sequence[int]) -> RedundancyCertificate | None:
    """Look for a convex combination of other points whose lift lies weakly below alpha's.

    A certificate means the affine piece of ``alpha`` never strictly dominates, so
    ``alpha`` is not a subdivision vertex.  The LP minimises the combined height,
    so ``None`` means no certificate exists at all.
    """
    alpha = tuple(alpha)
    if alpha not in L:
        raise KeyError(f"{alpha} is not a lifted point")
    others = [b for b in L.points if b != alpha]
    if not others:
        return None
    q = np.array(others, dtype=float).T
    a_eq = np.vstack([q, np.ones(len(others))])
    b_eq = np.append(np.array(alpha, dtype=float), 1.0)
    cost = np.array([float(L[b]) for b in others])
    res = linprog(cost, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if res.status != 0:
        return None
    na = L[alpha]
    scale = max(1.0, max(abs(float(h)) for h in L._heights.values()))
    tol = EPS_LP * scale
    if float(na) < res.fun - tol:
        return None
    keep = [i for i, w in enumerate(res.x) if w > 1e-12]
    pts = tuple(others[i] for i in keep)
    weights: tuple[Height, ...] = tuple(float(res.x[i]) for i in keep)
    combined: Height = float(sum(res.x[i] * cost[i] for i in keep))
    strict = float(na) > res.fun + tol
    if L.exact:
        fr = tuple(Fraction(w).limit_denominator(10**6) for w in weights)
        exact_ok = sum(fr) == 1 and all(
            sum(w * p[k] for w, p in zip(fr, pts)) == alpha[k] for k in range(L.dim)
        )
        if exact_ok:
            weights = fr
            combined = sum(w * L[p] for w, p in zip(fr, pts))
            if na < combined:
                return None
            strict = na > combined
    return RedundancyCertificate(pts, weights, combined, strict)


# ----------------------------------------------------------------------------
# corner loci


@dataclass(frozen=True)
class PolyhedralComplex:
    """Planar corner locus: vertices, bounded edges and rays.

    ``rays`` entries are ``(vertex index, primitive direction)``; ``edge_weights``
    and ``ray_weights`` carry the lattice lengths of the dual subdivision edges.
    """

    vertices: tuple[tuple[float, float], ...]
    edges: tuple[tuple[int, int], ...]
    rays: tuple[tuple[int, tuple[int, int]], ...]
    edge_weights: tuple[int, ...] = ()
    ray_weights: tuple[int, ...] = ()
    dual_edges: tuple[tuple[Exponent, Exponent], ...] = field(default=(), repr=False)

    def to_dict(self) -> dict:
        return {
            "vertices": [list(v) for v in self.vertices],
            "edges": [list(e) for e in self.edges],
            "rays": [{"vertex": v, "direction": list(d)} for v, d in self.rays],
            "edge_weights": list(self.edge_weights),
            "ray_weights": list(self.ray_weights),
        }

    def vertex_bbox(self) -> tuple[tuple[float, float], tuple[float, float]]:
        v = np.array(self.vertices, dtype=float)
        return tuple(v.min(axis=0)), tuple(v.max(axis=0))


def _outward(cell: Sequence[Exponent], a: Exponent, b: Exponent) -> tuple[int, int]:
    """Primitive outward normal of the edge {a, b} of a counterclockwise cell."""
    n = len(cell)
    i = cell.index(a)
    if cell[(i + 1) % n] != b:
        a, b = b, a
    dx, dy = b[0] - a[0], b[1] - a[1]
    g = math.gcd(dx, dy)
    return (dy // g, -dx // g)


def corner_locus_2d(L: Lifting, sub: Subdivision | None = None) -> PolyhedralComplex:
    """Dualise the regular subdivision of ``L`` into the corner locus of ``F``."""
    if sub is None:
        sub = regular_subdivision(L)
    vertices = tuple((float(s[0]), float(s[1])) for s in sub.slopes)
    edges, ew, dual = [], [], []
    rays, rw = [], []
    for e, cs in sorted(sub.edge_map().items(), key=lambda kv: sorted(kv[0])):
        a, b = sorted(e)
        length = math.gcd(b[0] - a[0], b[1] - a[1])
        if len(cs) == 2:
            edges.append((cs[0], cs[1]))
            ew.append(length)
            dual.append((a, b))
        else:
            rays.append((cs[0], _outward(sub.cells[cs[0]], a, b)))
            rw.append(length)
    return PolyhedralComplex(vertices, tuple(edges), tuple(rays), tuple(ew), tuple(rw), tuple(dual))


__all__ = [
    "DegenerateHullError",
    "EPS_TIE",
    "Lifting",
    "PolyhedralComplex",
    "RedundancyCertificate",
    "Subdivision",
    "corner_locus_2d",
    "is_subdivision_vertex",
    "redundancy_criterion",
    "regular_subdivision",
    "trop_eval",
    "trop_eval_many",
]
