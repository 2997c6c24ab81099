"""Numerical Ronkin functions and the uniform-bound apparatus around them.

The torus average of ``log|f(e^{x+i theta})|`` is computed as
``F(x) + mean log|g|`` where ``F`` is the largest term magnitude and ``g`` the
factored sum, so evaluation points far out in log-space stay finite.

Nodes are processed in fixed-size blocks through :func:`amoebakit.parallel.pmap`;
block partial sums are combined in block order, which makes every value
independent of the worker count.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Mapping, Sequence

import numpy as np

from .laurent import Exponent, LaurentPolynomial, Weights, log_magnitudes, substitute_t
from .parallel import pmap
from .polytope import DegenerateHullError, is_maximally_sparse
from .tropical import Lifting

DISCARD_THRESHOLD = 1e-300
DISCARD_BUDGET = 0.01
DEFAULT_STEP = 0.05
_BLOCK = 8192
_ROWS = 32


class QuadratureBudgetError(RuntimeError):
    """Too many quadrature nodes landed on (numerical) zeros of the integrand."""


class Scheme(str, enum.Enum):
    TENSOR_GRID = "TensorGrid"
    MONTE_CARLO = "MonteCarlo"


@dataclass(frozen=True)
class QuadratureSpec:
    scheme: Scheme = Scheme.TENSOR_GRID
    nodes_per_angle: int = 256
    samples: int = 100_000
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        if self.scheme is Scheme.TENSOR_GRID and self.nodes_per_angle < 16:
            raise ValueError("nodes_per_angle must be at least 16")
        if self.scheme is Scheme.MONTE_CARLO and self.samples < 10_000:
            raise ValueError("samples must be at least 10^4")

    @classmethod
    def default_for(cls, dim: int) -> "QuadratureSpec":
        if dim <= 2:
            return cls(Scheme.TENSOR_GRID, 256)
        return cls(Scheme.MONTE_CARLO, samples=100_000)

    def node_count(self, dim: int) -> int:
        if self.scheme is Scheme.TENSOR_GRID:
            return self.nodes_per_angle**dim
        return self.samples

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme.value,
            "nodes_per_angle": self.nodes_per_angle,
            "samples": self.samples,
            "seed": self.seed,
        }


@lru_cache(maxsize=16)
def _nodes(q: QuadratureSpec, dim: int) -> np.ndarray:
    if q.scheme is Scheme.TENSOR_GRID:
        # midpoint rule: periodic trapezoid without a node at theta = 0 or pi
        axis = 2.0 * np.pi * (np.arange(q.nodes_per_angle) + 0.5) / q.nodes_per_angle
        grids = np.meshgrid(*([axis] * dim), indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=-1)
    rng = np.random.default_rng(q.seed)
    return rng.uniform(0.0, 2.0 * np.pi, size=(q.samples, dim))


@lru_cache(maxsize=32)
def _phase_table(exponents: tuple, q: QuadratureSpec, dim: int) -> np.ndarray:
    """``exp(i <alpha, theta>)`` for every node (rows) and exponent (columns)."""
    E = np.array(exponents, dtype=float).reshape(-1, dim)
    return np.exp(1j * (_nodes(q, dim) @ E.T))


@dataclass(frozen=True)
class RonkinValue:
    value: float
    std_error: float = 0.0
    discarded: int = 0
    nodes: int = 0


def _block_partials(weights: np.ndarray, table: np.ndarray, start: int):
    """Sums of log|g| and log|g|^2 plus discard counts over one node block."""
    block = table[start:start + _BLOCK]
    g = np.zeros((weights.shape[0], block.shape[0]), dtype=complex)
    for k in range(weights.shape[1]):
        g += weights[:, k, None] * block[None, :, k]
    mag = np.abs(g)
    bad = mag < DISCARD_THRESHOLD
    logs = np.log(np.where(bad, 1.0, mag))
    return logs.sum(axis=1), (logs * logs).sum(axis=1), bad.sum(axis=1)


def torus_log_average(
    exponents: Sequence[Exponent],
    weights: np.ndarray,
    q: QuadratureSpec,
    *,
    raise_on_budget: bool = True,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Mean of ``log|sum_k w_k e^{i<alpha_k, theta>}|`` for each row of ``weights``.

    Returns ``(mean, std_error, discarded)`` arrays.  This is the workhorse behind
    every Ronkin evaluation; callers add back the factored-out magnitude.
    """
    exponents = tuple(tuple(int(c) for c in e) for e in exponents)
    dim = len(exponents[0])
    weights = np.atleast_2d(np.asarray(weights, dtype=complex))
    table = _phase_table(exponents, q, dim)
    total = table.shape[0]
    starts = range(0, total, _BLOCK)
    rows = range(0, weights.shape[0], _ROWS)
    tasks = list(product(rows, starts))
    parts = pmap(lambda rs: _block_partials(weights[rs[0]:rs[0] + _ROWS], table, rs[1]), tasks)
    s1 = np.zeros(weights.shape[0])
    s2 = np.zeros(weights.shape[0])
    bad = np.zeros(weights.shape[0], dtype=np.int64)
    for (r, _), (a, b, c) in zip(tasks, parts):
        s1[r:r + _ROWS] += a
        s2[r:r + _ROWS] += b
        bad[r:r + _ROWS] += c
    kept = total - bad
    if raise_on_budget and np.any(bad > DISCARD_BUDGET * total):
        worst = int(bad.max())
        raise QuadratureBudgetError(
            f"{worst} of {total} quadrature nodes hit |g| < {DISCARD_THRESHOLD:g}; "
            "the evaluation point sits too deep inside the amoeba for this resolution"
        )
    kept = np.maximum(kept, 1)
    mean = s1 / kept
    if q.scheme is Scheme.MONTE_CARLO:
        var = np.maximum(s2 / kept - mean**2, 0.0)
        err = np.sqrt(var / kept)
    else:
        err = np.zeros_like(mean)
    return mean, err, bad


def ronkin_many(f: LaurentPolynomial, xs, q: QuadratureSpec | None = None) -> list[RonkinValue]:
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    if xs.shape[1] != f.dim:
        raise ValueError(f"points have dimension {xs.shape[1]}, polynomial {f.dim}")
    q = q or QuadratureSpec.default_for(f.dim)
    logs = log_magnitudes(f, xs)
    top = logs.max(axis=1)
    n = q.node_count(f.dim)
    if len(f) == 1:
        # constant integrand: the average is the value itself
        return [RonkinValue(float(t), 0.0, 0, n) for t in top]
    w = np.exp(logs - top[:, None]) * np.exp(1j * np.angle(f.coefficients))[None, :]
    mean, err, bad = torus_log_average(f.support, w, q)
    return [RonkinValue(float(t + m), float(e), int(b), n) for t, m, e, b in zip(top, mean, err, bad)]


def ronkin_estimate(f: LaurentPolynomial, x: Sequence[float], q: QuadratureSpec | None = None) -> RonkinValue:
    """Torus average of ``log|f|`` over ``Log^{-1}(x)``."""
    return ronkin_many(f, [list(x)], q)[0]


def ronkin_gradient(
    f: LaurentPolynomial, x: Sequence[float], q: QuadratureSpec | None = None, h: float = DEFAULT_STEP
) -> np.ndarray:
    """Central differences of the Ronkin function, step ``h`` in every axis."""
    x = np.asarray(x, dtype=float)
    if len(f) == 1:
        return f.exponents[0].astype(float)
    eye = np.eye(f.dim) * h
    pts = np.concatenate([x + eye, x - eye])
    vals = np.array([v.value for v in ronkin_many(f, pts, q)])
    return (vals[: f.dim] - vals[f.dim:]) / (2.0 * h)


def spine_constants(
    f: LaurentPolynomial,
    components: Sequence[tuple[Sequence[int], Sequence[float]]],
    q: QuadratureSpec | None = None,
) -> Lifting:
    """Heights ``nu = -c_alpha`` with ``c_alpha = N_f(x_alpha) - <alpha, x_alpha>``.

    ``components`` pairs each order with a point of its complement component.
    """
    if not components:
        raise ValueError("no complement components given")
    orders = [tuple(int(c) for c in a) for a, _ in components]
    pts = np.array([list(x) for _, x in components], dtype=float)
    vals = ronkin_many(f, pts, q)
    heights = {}
    for alpha, x, v in zip(orders, pts, vals):
        c = v.value - float(np.dot(alpha, x))
        heights[alpha] = -c
    return Lifting(heights)


# ----------------------------------------------------------------------------
# the uniform bound |N_{f_t} - F_t| <= C


@dataclass
class BoundRow:
    t: float
    gap: float
    argmax: tuple[float, ...]
    std_error: float
    bound: float
    within_bound: bool

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "log_t": math.log(self.t),
            "gap": self.gap,
            "argmax": list(self.argmax),
            "std_error": self.std_error,
            "bound": self.bound,
            "within_bound": self.within_bound,
        }


@dataclass
class BoundReport:
    rows: list[BoundRow]
    maximally_sparse: bool
    warnings: list[str] = field(default_factory=list)

    @property
    def gaps(self) -> list[float]:
        return [r.gap for r in self.rows]

    @property
    def max_gap(self) -> float:
        return max(self.gaps)

    @property
    def spread(self) -> float:
        """``max gap / min gap`` over the t list (``inf`` if some gap is 0 and others are not)."""
        lo, hi = min(self.gaps), max(self.gaps)
        if hi == 0:
            return 1.0
        return hi / lo if lo > 0 else math.inf

    def to_dict(self) -> dict:
        return {
            "rows": [r.to_dict() for r in self.rows],
            "max_gap": self.max_gap,
            "min_gap": min(self.gaps),
            "spread": self.spread,
            "maximally_sparse": self.maximally_sparse,
            "warnings": list(self.warnings),
        }


def tropical_majorant(f: LaurentPolynomial, xs) -> np.ndarray:
    """``max_alpha (<alpha, x> + log|a_alpha|)``, the F_t of the bound for ``f = f_t``."""
    return log_magnitudes(f, np.atleast_2d(np.asarray(xs, dtype=float))).max(axis=1)


def ft_bound_check(
    f: LaurentPolynomial,
    weights: Weights,
    t_list: Sequence[float],
    x_grid,
    q: QuadratureSpec | None = None,
) -> BoundReport:
    """Sup over ``x_grid`` of ``|N_{f_t} - F_t|`` for every ``t``."""
    notes = []
    try:
        sparse = is_maximally_sparse(f)
    except DegenerateHullError:
        sparse = len(f) == 1
    if not sparse:
        notes.append("input is not maximally sparse; the uniform bound is not guaranteed")
        warnings.warn(notes[-1], stacklevel=2)
    xs = np.atleast_2d(np.asarray(x_grid, dtype=float))
    rows = []
    for t in t_list:
        ft = substitute_t(f, weights, t)
        xi_sum = sum(abs(c) * math.exp(float(weights[e])) for e, c in f.terms)
        bound = math.log(xi_sum)
        vals = ronkin_many(ft, xs, q)
        n = np.array([v.value for v in vals])
        err = np.array([v.std_error for v in vals])
        gap = np.abs(n - tropical_majorant(ft, xs))
        k = int(np.argmax(gap))
        rows.append(
            BoundRow(
                t=float(t),
                gap=float(gap[k]),
                argmax=tuple(float(c) for c in xs[k]),
                std_error=float(err.max()),
                bound=bound,
                within_bound=bool(gap[k] <= bound + 3.0 * err.max()),
            )
        )
    return BoundReport(rows, sparse, notes)


# ----------------------------------------------------------------------------
# coefficient-box minimisation and the dominance threshold


@dataclass
class PhiResult:
    minimum: float
    argmin: dict[Exponent, complex]
    trials: int

    def to_dict(self) -> dict:
        return {
            "minimum": self.minimum,
            "argmin": [
                {"point": list(k), "re": v.real, "im": v.imag} for k, v in self.argmin.items()
            ],
            "trials": self.trials,
        }


def phi_lower_bound(
    alpha0: Sequence[int],
    xi: Mapping[Sequence[int], complex],
    trials: int = 256,
    q: QuadratureSpec | None = None,
    seed: int = 0,
) -> PhiResult:
    """Randomised search for ``min_K Phi`` over the coefficient box ``|c_beta| <= |xi_beta|``.

    ``Phi(c)`` is the torus average of ``log|xi_{alpha0} e^{i<alpha0,theta>} + sum c_beta e^{i<beta,theta>}|``.
    Half the trials sit on corners of the box (full moduli, random phases), the
    rest are uniform in the polydisc.  The result is the smallest value seen, an
    upper estimate of the true minimum.
    """
    alpha0 = tuple(int(c) for c in alpha0)
    xi = {tuple(int(c) for c in k): complex(v) for k, v in xi.items()}
    if xi.get(alpha0, 0) == 0:
        raise ValueError("xi(alpha0) must be nonzero")
    others = [k for k in sorted(xi) if k != alpha0]
    lead = xi[alpha0]
    if not others:
        return PhiResult(math.log(abs(lead)), {}, 0)
    q = q or QuadratureSpec.default_for(len(alpha0))
    rng = np.random.default_rng(seed)
    radii = np.array([abs(xi[k]) for k in others])
    m = len(others)
    n_corner = (trials + 1) // 2
    mods = np.vstack([
        np.tile(radii, (n_corner, 1)),
        radii * np.sqrt(rng.uniform(size=(trials - n_corner, m))),
    ])
    phases = np.exp(2j * np.pi * rng.uniform(size=(trials, m)))
    coeffs = mods * phases
    exps = [alpha0] + others
    w = np.hstack([np.full((trials, 1), lead), coeffs])
    mean, _, bad = torus_log_average(exps, w, q, raise_on_budget=False)
    ok = bad <= DISCARD_BUDGET * q.node_count(len(alpha0))
    mean = np.where(ok, mean, np.inf)
    k = int(np.argmin(mean))
    return PhiResult(float(mean[k]), dict(zip(others, (complex(c) for c in coeffs[k]))), trials)


def threshold_terms(x0, v, L: Lifting, t: float, alpha1) -> dict[Exponent, dict]:
    alpha1 = tuple(int(c) for c in alpha1)
    if alpha1 not in L:
        raise KeyError(f"{alpha1} is not a lifted point")
    x0 = np.asarray(x0, dtype=float)
    v = np.asarray(v, dtype=float)
    log_t = math.log(t)
    top = float(np.dot(alpha1, v))
    out = {}
    for alpha in L.points:
        if alpha == alpha1:
            continue
        delta = top - float(np.dot(alpha, v))
        if delta <= 0:
            raise ValueError(f"{alpha1} is not strictly maximal in direction {tuple(v)} (ties {alpha})")
        a = float(np.dot(np.subtract(alpha1, alpha), x0))
        b = float(L[alpha1]) - float(L[alpha])
        out[alpha] = {"A": a, "B": b, "delta": delta, "s": max(0.0, -(a + b * log_t) / delta)}
    return out


def dominance_threshold(x0, v, L: Lifting, t: float, alpha1) -> float:
    """Smallest ``s0 >= 0`` past which ``alpha1`` alone maximises ``<alpha, x0 + s v> + nu(alpha) log t``.

    Each competitor is overtaken where ``A + B log t + s delta`` turns positive,
    with ``A = <alpha1 - alpha, x0>``, ``B = nu(alpha1) - nu(alpha)`` and
    ``delta = <alpha1 - alpha, v> > 0``.
    """
    terms = threshold_terms(x0, v, L, t, alpha1)
    return max((d["s"] for d in terms.values()), default=0.0)


__all__ = [
    "BoundReport",
    "BoundRow",
    "PhiResult",
    "QuadratureBudgetError",
    "QuadratureSpec",
    "RonkinValue",
    "Scheme",
    "dominance_threshold",
    "ft_bound_check",
    "phi_lower_bound",
    "ronkin_estimate",
    "ronkin_gradient",
    "ronkin_many",
    "spine_constants",
    "threshold_terms",
    "torus_log_average",
    "tropical_majorant",
]
