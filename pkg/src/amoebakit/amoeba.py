"""Planar amoeba rasters, complement components and solidness verdicts.

Membership is sampled by solving fibres: for a column at ``x1`` and an angle
``theta1`` the polynomial ``z2 -> f(e^{x1 + i theta1}, z2)`` is solved through
companion-matrix eigenvalues.  Sorting the root log-moduli per fibre gives
branches ``r_(1) <= ... <= r_(d)``; each is a continuous function of
``theta1``, so its image over the circle is an interval, and everything between
the smallest and largest sampled value of a branch belongs to the amoeba slice.
Rows are treated the same way with the roles of ``z1`` and ``z2`` swapped.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy import ndimage

from .laurent import Exponent, LaurentPolynomial, log_magnitudes
from .parallel import pmap
from .polytope import DegenerateHullError, _in_hull_lp, newton_polytope
from .ronkin import QuadratureSpec, ronkin_gradient
from .tropical import Lifting, corner_locus_2d

BOX_MARGIN = 2.0
MIN_COMPONENT_PIXELS = 4
MIN_WITNESS_CLEARANCE = 3.0
ORDER_ROUNDING = 0.25
FAILURE_BUDGET = 0.01
_LEAD_EPS = 1e-13


class RasterError(RuntimeError):
    """Too many fibres failed to solve."""


class OrderAssignmentError(RuntimeError):
    """A component's Ronkin gradient does not round cleanly to a lattice point."""


class Verdict(enum.IntEnum):
    IN_AMOEBA = 0
    CERTIFIED_COMPLEMENT = 1
    UNCERTIFIED_COMPLEMENT = 2


@dataclass(frozen=True)
class Box2D:
    min: tuple[float, float]
    max: tuple[float, float]

    def __post_init__(self):
        lo = tuple(float(v) for v in self.min)
        hi = tuple(float(v) for v in self.max)
        if len(lo) != 2 or len(hi) != 2 or not (lo[0] < hi[0] and lo[1] < hi[1]):
            raise ValueError(f"invalid box {lo} .. {hi}")
        object.__setattr__(self, "min", lo)
        object.__setattr__(self, "max", hi)

    @property
    def width(self) -> float:
        return self.max[0] - self.min[0]

    @property
    def height(self) -> float:
        return self.max[1] - self.min[1]

    def scaled(self, s: float) -> "Box2D":
        return Box2D((self.min[0] * s, self.min[1] * s), (self.max[0] * s, self.max[1] * s))

    def expanded(self, margin: float) -> "Box2D":
        return Box2D(
            (self.min[0] - margin, self.min[1] - margin), (self.max[0] + margin, self.max[1] + margin)
        )

    def contains(self, pts) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        return (
            (pts[..., 0] >= self.min[0]) & (pts[..., 0] <= self.max[0])
            & (pts[..., 1] >= self.min[1]) & (pts[..., 1] <= self.max[1])
        )

    def to_dict(self) -> dict:
        return {"min": list(self.min), "max": list(self.max)}


def default_box(f: LaurentPolynomial, margin: float = BOX_MARGIN) -> Box2D:
    """Bounding box of the coefficient spine's vertices, padded by ``margin``."""
    if f.dim != 2:
        raise ValueError(f"default box needs a bivariate polynomial, got dim {f.dim}")
    if len(f) == 1:
        raise DegenerateHullError("a monomial has an empty amoeba; no box to choose")
    spine = corner_locus_2d(Lifting.from_coefficients(f))
    lo, hi = spine.vertex_bbox()
    return Box2D((lo[0] - margin, lo[1] - margin), (hi[0] + margin, hi[1] + margin))


@dataclass
class AmoebaRaster:
    """Pixel verdicts over a box.  Arrays are indexed ``[i, j]`` with ``i`` along x1."""

    box: Box2D
    resolution: tuple[int, int]
    verdicts: np.ndarray = field(repr=False)
    samples: np.ndarray = field(repr=False)
    certificates: np.ndarray = field(repr=False)
    support: tuple[Exponent, ...] = field(repr=False)
    fibers: int = 0
    failed_fibers: int = 0

    @property
    def pixel_size(self) -> tuple[float, float]:
        return self.box.width / self.resolution[0], self.box.height / self.resolution[1]

    def centers(self) -> tuple[np.ndarray, np.ndarray]:
        dx, dy = self.pixel_size
        xs = self.box.min[0] + (np.arange(self.resolution[0]) + 0.5) * dx
        ys = self.box.min[1] + (np.arange(self.resolution[1]) + 0.5) * dy
        return xs, ys

    def pixel_center(self, i: int, j: int) -> tuple[float, float]:
        xs, ys = self.centers()
        return float(xs[i]), float(ys[j])

    @property
    def in_amoeba(self) -> np.ndarray:
        return self.verdicts == Verdict.IN_AMOEBA

    def amoeba_points(self) -> np.ndarray:
        xs, ys = self.centers()
        ii, jj = np.nonzero(self.in_amoeba)
        return np.column_stack([xs[ii], ys[jj]])

    def counts(self) -> dict[str, int]:
        return {v.name: int((self.verdicts == v).sum()) for v in Verdict}


def _fiber_intervals(
    f: LaurentPolynomial, axis: int, fixed: np.ndarray, n_fibers: int, centre: float
) -> tuple[np.ndarray, np.ndarray, int]:
    """Per fixed coordinate value, the branch intervals of the free coordinate.

    ``axis`` is the coordinate held fixed (0: columns at x1, solve for z2).
    Returns ``lo, hi`` of shape (len(fixed), degree) and the failed fibre count.
    """
    other = 1 - axis
    E = f.exponents
    shift = int(E[:, other].min())
    deg = int(E[:, other].max()) - shift
    thetas = 2.0 * np.pi * (np.arange(n_fibers) + 0.5) / n_fibers
    log_a = np.log(np.abs(f.coefficients))
    arg_a = np.angle(f.coefficients)
    powers = E[:, other] - shift

    lo = np.full((len(fixed), deg), np.inf)
    hi = np.full((len(fixed), deg), -np.inf)
    failed = 0
    for c, x in enumerate(fixed):
        # substitute z_other = e^centre * w so the roots of interest have |w| ~ 1
        mag = log_a + E[:, axis] * x + powers * centre
        mag = mag - mag.max()
        ph = arg_a[None, :] + E[None, :, axis] * thetas[:, None]
        terms = np.exp(mag)[None, :] * np.exp(1j * ph)
        coeffs = np.zeros((n_fibers, deg + 1), dtype=complex)
        for k in range(len(f)):
            coeffs[:, deg - powers[k]] += terms[:, k]
        logs, bad = _solve_fibers(coeffs)
        failed += bad
        if logs.shape[0] == 0:
            continue
        logs = np.sort(logs, axis=1) + centre
        lo[c] = logs.min(axis=0)
        hi[c] = logs.max(axis=0)
    return lo, hi, failed


def _solve_fibers(coeffs: np.ndarray) -> tuple[np.ndarray, int]:
    """Log-moduli of the roots of each row (highest degree first).

    Roots lost to a vanishing leading (trailing) coefficient are reported as
    +inf (-inf) so the sorted branches stay aligned.
    """
    n, d1 = coeffs.shape
    deg = d1 - 1
    scale = np.abs(coeffs).max(axis=1)
    lead = np.abs(coeffs[:, 0]) > _LEAD_EPS * scale
    tail = np.abs(coeffs[:, -1]) > _LEAD_EPS * scale
    regular = lead & tail
    out = np.empty((n, deg))
    ok = np.ones(n, dtype=bool)
    idx = np.flatnonzero(regular)
    if len(idx):
        monic = coeffs[idx, 1:] / coeffs[idx, :1]
        comp = np.zeros((len(idx), deg, deg), dtype=complex)
        comp[:, 0, :] = -monic
        if deg > 1:
            comp[:, np.arange(1, deg), np.arange(deg - 1)] = 1.0
        try:
            roots = np.linalg.eigvals(comp)
            with np.errstate(divide="ignore"):
                out[idx] = np.log(np.abs(roots))
        except np.linalg.LinAlgError:
            regular[idx] = False
    for r in np.flatnonzero(~regular):
        row = coeffs[r]
        keep = np.abs(row) > _LEAD_EPS * scale[r]
        if not keep.any():
            ok[r] = False
            continue
        first, last = np.flatnonzero(keep)[[0, -1]]
        try:
            roots = np.roots(row[first:last + 1]) if last > first else np.array([])
        except np.linalg.LinAlgError:
            ok[r] = False
            continue
        with np.errstate(divide="ignore"):
            vals = np.log(np.abs(roots))
        out[r] = np.concatenate([np.full(deg - last, -np.inf), vals, np.full(first, np.inf)])
    return out[ok], int((~ok).sum())


def _mark(marks: np.ndarray, samples: np.ndarray, lo, hi, start: float, step: float) -> None:
    size = marks.shape[1]
    for c in range(lo.shape[0]):
        for a, b in zip(lo[c], hi[c]):
            if not (np.isfinite(a) or np.isfinite(b)) or a > b:
                continue
            j0 = max(0, int(math.floor((a - start) / step)) if np.isfinite(a) else 0)
            j1 = min(size - 1, int(math.floor((b - start) / step)) if np.isfinite(b) else size - 1)
            if j0 > j1:
                continue
            marks[c, j0:j1 + 1] = True
            samples[c, j0:j1 + 1] += 1


def _lopsided_grid(f: LaurentPolynomial, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Index of a dominating term at each pixel centre, -1 where none dominates."""
    pts = np.stack(np.meshgrid(xs, ys, indexing="ij"), axis=-1)
    logs = log_magnitudes(f, pts)
    top = logs.max(axis=-1)
    rest = np.exp(logs - top[..., None]).sum(axis=-1) - 1.0
    idx = logs.argmax(axis=-1)
    return np.where(rest < 1.0 - 1e-12, idx, -1)


def lopsided_certificate(f: LaurentPolynomial, x: Sequence[float]) -> Exponent | None:
    """The dominating exponent at ``x`` if one term outweighs all others together."""
    logs = log_magnitudes(f, np.asarray(x, dtype=float))
    k = int(np.argmax(logs))
    rest = float(np.exp(np.delete(logs, k) - logs[k]).sum())
    return f.support[k] if rest < 1.0 else None


def raster_2d(
    f: LaurentPolynomial,
    box: Box2D,
    resolution: tuple[int, int] = (512, 512),
    fibers_per_column: int = 64,
) -> AmoebaRaster:
    if f.dim != 2:
        raise ValueError(f"rasterisation needs a bivariate polynomial, got dim {f.dim}")
    w, h = int(resolution[0]), int(resolution[1])
    support = tuple(f.support)
    verdicts = np.full((w, h), Verdict.UNCERTIFIED_COMPLEMENT, dtype=np.int8)
    samples = np.zeros((w, h), dtype=np.int32)
    raster = AmoebaRaster(box, (w, h), verdicts, samples, np.full((w, h), -1, dtype=np.int32),
                          support, fibers_per_column)
    xs, ys = raster.centers()
    dx, dy = raster.pixel_size
    if len(f) > 1:
        deg2 = np.ptp(f.exponents[:, 1])
        deg1 = np.ptp(f.exponents[:, 0])
        if deg2 == 0:
            raise ValueError("f does not depend on z2; fibres over columns are empty")
        marks = np.zeros((w, h), dtype=bool)
        chunks = np.array_split(np.arange(w), max(1, min(w, 16)))
        cy = 0.5 * (box.min[1] + box.max[1])
        cols = pmap(lambda ix: _fiber_intervals(f, 0, xs[ix], fibers_per_column, cy), chunks)
        failed = 0
        for ix, (lo, hi, bad) in zip(chunks, cols):
            _mark(marks[ix[0]:ix[-1] + 1], samples[ix[0]:ix[-1] + 1], lo, hi, box.min[1], dy)
            failed += bad
        total = w * fibers_per_column
        if deg1 > 0:
            marks_t = np.zeros((h, w), dtype=bool)
            samples_t = np.zeros((h, w), dtype=np.int32)
            chunks = np.array_split(np.arange(h), max(1, min(h, 16)))
            cx = 0.5 * (box.min[0] + box.max[0])
            rows = pmap(lambda ix: _fiber_intervals(f, 1, ys[ix], fibers_per_column, cx), chunks)
            for ix, (lo, hi, bad) in zip(chunks, rows):
                _mark(marks_t[ix[0]:ix[-1] + 1], samples_t[ix[0]:ix[-1] + 1], lo, hi, box.min[0], dx)
                failed += bad
            total += h * fibers_per_column
            marks |= marks_t.T
            samples += samples_t.T
        if failed > FAILURE_BUDGET * total:
            raise RasterError(f"{failed} of {total} fibres failed to solve")
        raster.failed_fibers = failed
        verdicts[marks] = Verdict.IN_AMOEBA
    cert = _lopsided_grid(f, xs, ys)
    free = verdicts != Verdict.IN_AMOEBA
    hit = free & (cert >= 0)
    verdicts[hit] = Verdict.CERTIFIED_COMPLEMENT
    raster.certificates[hit] = cert[hit]
    return raster


# ----------------------------------------------------------------------------
# complement components


@dataclass
class ComplementComponent:
    label: int
    pixels: np.ndarray = field(repr=False)
    bounded: bool
    witness: tuple[int, int]
    witness_point: tuple[float, float]
    clearance: float
    order: Exponent | None = None
    gradient: tuple[float, ...] | None = None

    @property
    def size(self) -> int:
        return int(self.pixels.shape[0])

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "pixels": self.size,
            "bounded": self.bounded,
            "witness_pixel": list(self.witness),
            "witness_point": list(self.witness_point),
            "clearance_pixels": self.clearance,
            "order": list(self.order) if self.order is not None else None,
            "gradient": list(self.gradient) if self.gradient is not None else None,
        }


def complement_components(
    raster: AmoebaRaster, min_pixels: int = MIN_COMPONENT_PIXELS
) -> list[ComplementComponent]:
    """4-connected components of the non-amoeba pixels, largest clearance witness each."""
    free = ~raster.in_amoeba
    labels, n = ndimage.label(free)
    if free.all():
        dist = np.full(free.shape, np.inf)
    else:
        dist = ndimage.distance_transform_edt(free)
    w, h = free.shape
    xs, ys = raster.centers()
    out = []
    for lab in range(1, n + 1):
        pix = np.argwhere(labels == lab)
        if len(pix) < min_pixels:
            continue
        bounded = not (
            (pix[:, 0] == 0).any() or (pix[:, 0] == w - 1).any()
            or (pix[:, 1] == 0).any() or (pix[:, 1] == h - 1).any()
        )
        d = dist[pix[:, 0], pix[:, 1]]
        if np.isinf(d).all():
            k = int(np.argmin(np.abs(pix - np.array([w / 2, h / 2])).sum(axis=1)))
        else:
            k = int(np.argmax(d))
        i, j = int(pix[k, 0]), int(pix[k, 1])
        out.append(ComplementComponent(len(out), pix, bounded, (i, j), (float(xs[i]), float(ys[j])),
                                       float(d[k])))
    return out


def assign_orders(
    f: LaurentPolynomial,
    components: Sequence[ComplementComponent],
    q: QuadratureSpec | None = None,
    h: float | None = None,
) -> list[ComplementComponent]:
    """Round the Ronkin gradient at each witness to the component's order."""
    try:
        inside = newton_polytope(f).contains
    except DegenerateHullError:
        inside = lambda p: _in_hull_lp(p, f.support)  # noqa: E731
    out = []
    for comp in components:
        if comp.clearance < MIN_WITNESS_CLEARANCE:
            raise OrderAssignmentError(
                f"component {comp.label} has clearance {comp.clearance:.1f} px; "
                f"at least {MIN_WITNESS_CLEARANCE} needed for a reliable gradient"
            )
        step = h if h is not None else 0.05
        grad = ronkin_gradient(f, comp.witness_point, q, step)
        order = tuple(int(v) for v in np.rint(grad))
        if np.linalg.norm(grad - order) >= ORDER_ROUNDING or not inside(order):
            raise OrderAssignmentError(
                f"gradient {grad.round(4).tolist()} at {comp.witness_point} does not round to a "
                "lattice point of the Newton polygon"
            )
        out.append(replace(comp, order=order, gradient=tuple(float(g) for g in grad)))
    return out


@dataclass
class SolidReport:
    box: Box2D
    resolution: tuple[int, int]
    fibers: int
    component_count: int
    bounded_count: int
    vertex_count: int
    vertices: list[Exponent]
    orders: list[Exponent]
    solid: bool
    components: list[ComplementComponent] = field(repr=False, default_factory=list)
    raster: AmoebaRaster | None = field(repr=False, default=None)

    @property
    def bounded_orders(self) -> list[Exponent]:
        return [c.order for c in self.components if c.bounded]

    def to_dict(self) -> dict:
        return {
            "box": self.box.to_dict(),
            "resolution": list(self.resolution),
            "fibers_per_line": self.fibers,
            "component_count": self.component_count,
            "bounded_count": self.bounded_count,
            "vertex_count": self.vertex_count,
            "vertices": [list(v) for v in self.vertices],
            "orders": [list(o) for o in self.orders],
            "bounded_orders": [list(o) for o in self.bounded_orders],
            "solid": self.solid,
            "components": [c.to_dict() for c in self.components],
        }


def is_solid(
    f: LaurentPolynomial,
    box: Box2D | None = None,
    resolution: tuple[int, int] = (512, 512),
    q: QuadratureSpec | None = None,
    fibers: int = 64,
) -> SolidReport:
    """Raster, extract components, assign orders and compare against the vertices."""
    if f.dim != 2:
        raise ValueError(f"solidness checks need dim 2, got {f.dim}")
    poly = newton_polytope(f)
    box = box or default_box(f)
    raster = raster_2d(f, box, resolution, fibers)
    comps = assign_orders(f, complement_components(raster), q)
    orders = [c.order for c in comps]
    verts = list(poly.vertices)
    solid = (
        len(comps) == len(verts)
        and len(set(orders)) == len(orders)
        and set(orders) == set(verts)
    )
    return SolidReport(box, tuple(resolution), fibers, len(comps), sum(c.bounded for c in comps),
                       len(verts), verts, sorted(orders), solid, comps, raster)


__all__ = [
    "AmoebaRaster",
    "Box2D",
    "ComplementComponent",
    "OrderAssignmentError",
    "RasterError",
    "SolidReport",
    "Verdict",
    "assign_orders",
    "complement_components",
    "default_box",
    "is_solid",
    "lopsided_certificate",
    "raster_2d",
]
