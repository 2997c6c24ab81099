"""Tropical degeneration experiments on planar families ``f_t``."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .amoeba import (
    AmoebaRaster,
    Box2D,
    ComplementComponent,
    assign_orders,
    complement_components,
    default_box,
    is_solid,
    raster_2d,
)
from .laurent import Exponent, LaurentPolynomial, Weights, substitute_t
from .parallel import pmap
from .polytope import is_maximally_sparse
from .ronkin import QuadratureSpec, spine_constants
from .tropical import Lifting, PolyhedralComplex, Subdivision, corner_locus_2d, regular_subdivision

DegenerationWeights = Mapping[Exponent, float]
PointCloud2D = np.ndarray

WINDOW_MARGIN = 3.0
MIN_T = math.exp(-10.0)
_CHUNK = 2048


class NotMaximallySparseWarning(UserWarning):
    pass


def default_t_list(k_max: int = 8) -> list[float]:
    return [math.exp(-k) for k in range(1, k_max + 1)]


def _check_t_list(t_list: Sequence[float]) -> list[float]:
    ts = [float(t) for t in t_list]
    if not ts:
        raise ValueError("empty t list")
    for t in ts:
        if not 0.0 < t <= math.exp(-1.0) * (1 + 1e-12):
            raise ValueError(f"t={t} outside (0, 1/e]")
        if t < MIN_T * (1 - 1e-12):
            raise ValueError(f"t={t} is below e^-10; fibre solving there is not trustworthy")
    if any(b >= a for a, b in zip(ts, ts[1:])):
        raise ValueError("t list must be strictly decreasing")
    return ts


def _weights_lifting(f: LaurentPolynomial, weights: Weights) -> Lifting:
    missing = [e for e in f.support if e not in weights]
    if missing:
        raise ValueError(f"no weight for support point(s) {missing}")
    return Lifting({e: weights[e] for e in f.support})


def hausdorff(a: PointCloud2D, b: PointCloud2D) -> float:
    """Symmetric Hausdorff distance between two finite point clouds."""
    a = np.asarray(a, dtype=float).reshape(-1, 2)
    b = np.asarray(b, dtype=float).reshape(-1, 2)
    if len(a) == 0 or len(b) == 0:
        raise ValueError("Hausdorff distance of an empty cloud is undefined")
    return max(_directed(a, b), _directed(b, a))


def _directed(a: np.ndarray, b: np.ndarray) -> float:
    worst = 0.0
    for s in range(0, len(a), _CHUNK):
        block = a[s:s + _CHUNK]
        diff = block[:, None, :] - b[None, :, :]
        d = np.hypot(diff[..., 0], diff[..., 1])
        worst = max(worst, float(d.min(axis=1).max()))
    return worst


def sample_complex(gamma: PolyhedralComplex, spacing: float, extent: float) -> PointCloud2D:
    """Points every ``spacing`` along bounded edges and along rays up to length ``extent``."""
    if spacing <= 0:
        raise ValueError("spacing must be positive")
    verts = np.array(gamma.vertices, dtype=float).reshape(-1, 2)
    pieces = [verts]
    for i, j in gamma.edges:
        p, q = verts[i], verts[j]
        n = max(1, int(round(np.linalg.norm(q - p) / spacing)))
        s = np.linspace(0.0, 1.0, n + 1)[:, None]
        pieces.append(p + s * (q - p))
    for i, d in gamma.rays:
        d = np.asarray(d, dtype=float)
        d /= np.linalg.norm(d)
        n = int(math.floor(extent / spacing + 1e-9))
        pieces.append(verts[i] + np.arange(n + 1)[:, None] * spacing * d)
    pts = np.concatenate(pieces)
    _, keep = np.unique(np.round(pts, 9), axis=0, return_index=True)
    return pts[np.sort(keep)]


def rescaled_amoeba(
    f: LaurentPolynomial,
    weights: Weights,
    t: float,
    window: Box2D,
    resolution: tuple[int, int] = (512, 512),
    fibers: int = 64,
) -> PointCloud2D:
    """Amoeba pixels of ``f_t`` over ``|log t| * window``, mapped back by ``1/|log t|``."""
    if f.dim != 2:
        raise ValueError("rescaled amoebas are planar")
    raster = rescaled_raster(f, weights, t, window, resolution, fibers)
    if raster is None:
        return np.empty((0, 2))
    return raster.amoeba_points() / -math.log(t)


def rescaled_raster(
    f: LaurentPolynomial,
    weights: Weights,
    t: float,
    window: Box2D,
    resolution: tuple[int, int] = (512, 512),
    fibers: int = 64,
) -> AmoebaRaster | None:
    """Raster of ``f_t`` over the window blown up by ``|log t|`` (None for a monomial)."""
    ft = substitute_t(f, weights, t)
    if len(ft) == 1:
        return None
    return raster_2d(ft, window.scaled(-math.log(t)), resolution, fibers)


@dataclass
class ConvergenceRow:
    t: float
    k: float
    hausdorff: float
    cloud_size: int
    raster: AmoebaRaster | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {"t": self.t, "k": self.k, "hausdorff": self.hausdorff, "cloud_size": self.cloud_size}


@dataclass
class ConvergenceSweep:
    window: Box2D
    limit: PolyhedralComplex
    rows: list[ConvergenceRow]
    fit_c: float
    resolution: tuple[int, int]
    fibers: int

    @property
    def distances(self) -> list[float]:
        return [r.hausdorff for r in self.rows]

    def decreasing(self, slack: float = 0.0) -> bool:
        d = self.distances
        return all(b <= a * (1.0 + slack) for a, b in zip(d, d[1:]))

    def to_dict(self) -> dict:
        return {
            "window": self.window.to_dict(),
            "limit_complex": self.limit.to_dict(),
            "rows": [r.to_dict() for r in self.rows],
            "fit_c": self.fit_c,
            "strictly_decreasing": self.decreasing(),
            "resolution": list(self.resolution),
            "fibers_per_line": self.fibers,
        }

    def csv_rows(self) -> tuple[list[str], list[list]]:
        return ["t", "k", "hausdorff", "cloud_size"], [
            [r.t, r.k, r.hausdorff, r.cloud_size] for r in self.rows
        ]


def limit_window(limit: PolyhedralComplex, margin: float = WINDOW_MARGIN) -> Box2D:
    lo, hi = limit.vertex_bbox()
    return Box2D((lo[0] - margin, lo[1] - margin), (hi[0] + margin, hi[1] + margin))


def convergence_sweep(
    f: LaurentPolynomial,
    weights: Weights,
    t_list: Sequence[float],
    resolution: tuple[int, int] = (512, 512),
    fibers: int = 64,
) -> ConvergenceSweep:
    """Hausdorff distance of each rescaled amoeba to the limit corner locus, on a fixed window."""
    ts = _check_t_list(t_list)
    if len(f) < 2:
        raise ValueError("a single-term family has an empty amoeba")
    limit = corner_locus_2d(_weights_lifting(f, weights))
    window = limit_window(limit)
    spacing = min(window.width / resolution[0], window.height / resolution[1])
    extent = math.hypot(window.width, window.height)
    target = sample_complex(limit, spacing, extent)
    target = target[window.contains(target)]

    def one(t: float) -> ConvergenceRow:
        raster = rescaled_raster(f, weights, t, window, resolution, fibers)
        cloud = raster.amoeba_points() / -math.log(t)
        if len(cloud) == 0:
            raise RuntimeError(f"no amoeba points inside the window at t={t}")
        return ConvergenceRow(t, -math.log(t), hausdorff(cloud, target), len(cloud), raster)

    rows = pmap(one, ts)
    inv = np.array([1.0 / r.k for r in rows])
    d = np.array([r.hausdorff for r in rows])
    fit_c = float(inv @ d / (inv @ inv))
    return ConvergenceSweep(window, limit, rows, fit_c, tuple(resolution), fibers)


@dataclass
class SubdivisionRow:
    t: float
    subdivision: Subdivision | None
    spine_heights: dict[Exponent, float]
    matches: bool
    note: str = ""
    raster: AmoebaRaster | None = field(default=None, repr=False)
    components: list[ComplementComponent] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "subdivision": self.subdivision.to_dict() if self.subdivision else None,
            "spine_heights": [{"point": list(k), "height": v} for k, v in self.spine_heights.items()],
            "matches_limit": self.matches,
            "note": self.note,
        }


@dataclass
class SubdivisionSweep:
    limit: Subdivision
    rows: list[SubdivisionRow]
    warnings: list[str] = field(default_factory=list)

    @property
    def stable_from(self) -> int | None:
        """First row index from which every later row matches the limit."""
        first = None
        for i, r in enumerate(self.rows):
            if r.matches and first is None:
                first = i
            elif not r.matches:
                first = None
        return first

    def to_dict(self) -> dict:
        return {
            "limit_subdivision": self.limit.to_dict(),
            "rows": [r.to_dict() for r in self.rows],
            "stable_from_index": self.stable_from,
            "warnings": list(self.warnings),
        }

    def csv_rows(self) -> tuple[list[str], list[list]]:
        return ["t", "cells", "matches_limit"], [
            [r.t, len(r.subdivision.cells) if r.subdivision else 0, r.matches] for r in self.rows
        ]


@dataclass
class SpineEstimate:
    raster: AmoebaRaster
    components: list[ComplementComponent]
    lifting: Lifting
    subdivision: Subdivision
    complex: PolyhedralComplex

    def to_dict(self) -> dict:
        return {
            "box": self.raster.box.to_dict(),
            "components": [c.to_dict() for c in self.components],
            "heights": [{"point": list(k), "height": float(v)} for k, v in self.lifting.heights.items()],
            "subdivision": self.subdivision.to_dict(),
            "spine": self.complex.to_dict(),
        }


def spine_subdivision(
    f: LaurentPolynomial,
    resolution: tuple[int, int] = (512, 512),
    fibers: int = 64,
    q: QuadratureSpec | None = None,
    box: Box2D | None = None,
) -> SpineEstimate:
    """Ronkin spine of ``f``: component orders, their constants and the induced subdivision."""
    raster = raster_2d(f, box or default_box(f), resolution, fibers)
    comps = assign_orders(f, complement_components(raster), q)
    spine = spine_constants(f, [(c.order, c.witness_point) for c in comps], q)
    sub = regular_subdivision(spine)
    return SpineEstimate(raster, comps, spine, sub, corner_locus_2d(spine, sub))


def subdivision_stability_sweep(
    f: LaurentPolynomial,
    weights: Weights,
    t_list: Sequence[float],
    q: QuadratureSpec | None = None,
    resolution: tuple[int, int] = (512, 512),
    fibers: int = 64,
) -> SubdivisionSweep:
    ts = _check_t_list(t_list)
    limit = regular_subdivision(_weights_lifting(f, weights))
    notes = []
    if not is_maximally_sparse(f):
        notes.append("input is not maximally sparse")

    def one(t: float) -> SubdivisionRow:
        ft = substitute_t(f, weights, t)
        try:
            est = spine_subdivision(ft, resolution, fibers, q)
        except ValueError as exc:
            return SubdivisionRow(t, None, {}, False, str(exc))
        heights = {k: float(v) for k, v in est.lifting.heights.items()}
        return SubdivisionRow(t, est.subdivision, heights, est.subdivision.same_cells(limit), "",
                              est.raster, est.components)

    return SubdivisionSweep(limit, pmap(one, ts), notes)


@dataclass
class SolidRow:
    t: float
    solid: bool
    component_count: int
    vertex_count: int
    orders: list[Exponent]
    raster: AmoebaRaster | None = field(default=None, repr=False)
    components: list[ComplementComponent] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "solid": self.solid,
            "component_count": self.component_count,
            "vertex_count": self.vertex_count,
            "orders": [list(o) for o in self.orders],
        }


@dataclass
class SolidSweep:
    rows: list[SolidRow]
    warnings: list[str] = field(default_factory=list)

    @property
    def all_solid(self) -> bool:
        return all(r.solid for r in self.rows)

    def to_dict(self) -> dict:
        return {"rows": [r.to_dict() for r in self.rows], "all_solid": self.all_solid,
                "warnings": list(self.warnings)}

    def csv_rows(self) -> tuple[list[str], list[list]]:
        return ["t", "solid", "component_count", "vertex_count"], [
            [r.t, r.solid, r.component_count, r.vertex_count] for r in self.rows
        ]


def solidness_sweep(
    f: LaurentPolynomial,
    weights: Weights,
    t_list: Sequence[float],
    q: QuadratureSpec | None = None,
    resolution: tuple[int, int] = (512, 512),
    fibers: int = 64,
) -> SolidSweep:
    ts = _check_t_list(t_list)
    notes = []
    if not is_maximally_sparse(f):
        msg = "input is not maximally sparse; solidness is not predicted"
        warnings.warn(msg, NotMaximallySparseWarning, stacklevel=2)
        notes.append(msg)

    def one(t: float) -> SolidRow:
        rep = is_solid(substitute_t(f, weights, t), None, resolution, q, fibers)
        return SolidRow(t, rep.solid, rep.component_count, rep.vertex_count, rep.orders, rep.raster,
                        rep.components)

    return SolidSweep(pmap(one, ts), notes)


__all__ = [
    "ConvergenceRow",
    "ConvergenceSweep",
    "DegenerationWeights",
    "NotMaximallySparseWarning",
    "PointCloud2D",
    "SolidRow",
    "SolidSweep",
    "SpineEstimate",
    "SubdivisionRow",
    "SubdivisionSweep",
    "convergence_sweep",
    "default_t_list",
    "hausdorff",
    "limit_window",
    "rescaled_amoeba",
    "rescaled_raster",
    "sample_complex",
    "solidness_sweep",
    "spine_subdivision",
    "subdivision_stability_sweep",
]
