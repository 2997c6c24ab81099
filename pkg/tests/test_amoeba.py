import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from amoebakit.amoeba import (
    Box2D,
    OrderAssignmentError,
    Verdict,
    _solve_fibers,
    assign_orders,
    complement_components,
    default_box,
    is_solid,
    lopsided_certificate,
    raster_2d,
)
from amoebakit.degeneration import spine_subdivision
from amoebakit.laurent import LaurentPolynomial, parse_laurent
from amoebakit.polytope import DegenerateHullError, convex_hull, lattice_points, newton_polytope

TRIANGLE = parse_laurent("1 + z1 + z2", 2)
HOLE = parse_laurent("1 + z1^3 + z2^3 + 80*z1*z2", 2)
SQUARE_EDGES = LaurentPolynomial.from_dict({p: 1 for p in [(0, 0), (1, 0), (2, 0), (0, 1), (2, 1),
                                                            (0, 2), (1, 2), (2, 2)]})


@pytest.fixture(scope="module")
def triangle_raster():
    return raster_2d(TRIANGLE, default_box(TRIANGLE), (512, 512), 64)


@pytest.fixture(scope="module")
def hole_raster():
    return raster_2d(HOLE, default_box(HOLE), (512, 512), 64)


def test_box_validation():
    with pytest.raises(ValueError):
        Box2D((0, 0), (0, 1))
    b = Box2D((-1, -2), (3, 4))
    assert b.scaled(2) == Box2D((-2, -4), (6, 8))
    assert b.expanded(1) == Box2D((-2, -3), (4, 5))


def test_default_box_examples():
    assert default_box(TRIANGLE) == Box2D((-2, -2), (2, 2))
    with pytest.raises(ValueError):
        default_box(parse_laurent("5 + z1", 1))
    with pytest.raises(DegenerateHullError):
        default_box(parse_laurent("3*z1*z2", 2))


def test_monomial_raster_is_all_certified():
    r = raster_2d(parse_laurent("z1*z2", 2), Box2D((-2, -2), (2, 2)), (32, 32))
    assert (r.verdicts == Verdict.CERTIFIED_COMPLEMENT).all()
    comps = complement_components(r)
    assert len(comps) == 1 and not comps[0].bounded


def test_raster_needs_z2():
    with pytest.raises(ValueError, match="z2"):
        raster_2d(parse_laurent("1 + z1", 2), Box2D((-2, -2), (2, 2)), (32, 32))


def test_raster_of_a_horizontal_line():
    r = raster_2d(parse_laurent("1 + z2", 2), Box2D((-1, -1.01), (1, 0.99)), (20, 40))
    rows = np.flatnonzero(r.in_amoeba.any(axis=0))
    assert rows.tolist() == [20]
    assert r.in_amoeba[:, 20].all()


def test_lopsided_examples():
    assert lopsided_certificate(TRIANGLE, (10, 0)) == (1, 0)
    assert lopsided_certificate(TRIANGLE, (0, 0)) is None
    assert lopsided_certificate(parse_laurent("-2*z1^3*z2", 2), (4.0, -7.0)) == (3, 1)


def test_fiber_solver_handles_degree_drop():
    # leading coefficient zero: one root escapes to infinity; trailing zero: one root at 0
    logs, bad = _solve_fibers(np.array([[0.0, 1.0, -2.0], [1.0, -3.0, 0.0]], dtype=complex))
    assert bad == 0
    assert logs[0][0] == pytest.approx(math.log(2)) and logs[0][1] == math.inf
    assert logs[1][0] == -math.inf and logs[1][1] == pytest.approx(math.log(3))


def test_triangle_raster_components(triangle_raster):
    r = triangle_raster
    assert r.samples[r.in_amoeba].min() >= 1
    assert (r.certificates[r.verdicts == Verdict.CERTIFIED_COMPLEMENT] >= 0).all()
    assert (r.certificates[r.verdicts != Verdict.CERTIFIED_COMPLEMENT] == -1).all()
    comps = complement_components(r)
    assert len(comps) == 3 and not any(c.bounded for c in comps)
    orders = {c.order for c in assign_orders(TRIANGLE, comps)}
    assert orders == {(0, 0), (1, 0), (0, 1)}
    # the three spine rays from the origin run through the amoeba
    xs, ys = r.centers()
    for d in [(-1, 0), (0, -1), (1, 1)]:
        p = np.array(d) * 1.5
        i, j = np.searchsorted(xs, p[0]), np.searchsorted(ys, p[1])
        assert r.in_amoeba[i - 1:i + 1, j - 1:j + 1].any()


def test_interior_coefficient_opens_a_hole(hole_raster):
    comps = assign_orders(HOLE, complement_components(hole_raster))
    assert sum(not c.bounded for c in comps) == 3
    bounded = [c for c in comps if c.bounded]
    assert len(bounded) == 1 and bounded[0].order == (1, 1)


def test_monomial_component_order():
    f = parse_laurent("3*z1^2*z2", 2)
    comps = assign_orders(f, complement_components(raster_2d(f, Box2D((-1, -1), (1, 1)), (16, 16))))
    assert [c.order for c in comps] == [(2, 1)]


def test_component_without_clearance_is_refused(triangle_raster):
    comp = complement_components(triangle_raster)[0]
    with pytest.raises(OrderAssignmentError, match="clearance"):
        assign_orders(TRIANGLE, [replace(comp, clearance=1.0)])


def test_ambiguous_gradient_is_refused(triangle_raster):
    comp = complement_components(triangle_raster)[0]
    on_spine = replace(comp, witness_point=(0.0, 0.0))
    with pytest.raises(OrderAssignmentError, match="round"):
        assign_orders(TRIANGLE, [on_spine])


@pytest.mark.parametrize(
    "f,solid,count",
    [(TRIANGLE, True, 3), (HOLE, False, 4), (parse_laurent("1 + z1^5 + z2^5", 2), True, 3)],
)
def test_solidness_examples(f, solid, count):
    rep = is_solid(f)
    assert rep.solid is solid and rep.component_count == count
    assert rep.resolution == (512, 512) and rep.fibers == 64


def test_boundary_supported_has_no_bounded_component():
    rep = is_solid(SQUARE_EDGES)
    assert rep.bounded_count == 0
    assert rep.vertex_count <= rep.component_count <= len(lattice_points(newton_polytope(SQUARE_EDGES)))


def test_bounded_components_match_interior_spine_vertices(hole_raster):
    est = spine_subdivision(HOLE)
    interior = {v for v in est.subdivision.vertex_set
                if newton_polytope(HOLE).classify(v).value == "Interior"}
    bounded = {c.order for c in est.components if c.bounded}
    assert bounded == interior == {(1, 1)}


def _component_hull_excess(comp, raster):
    """Distance (pixels) of the worst non-amoeba hull pixel missing from the component."""
    pix = [tuple(int(v) for v in p) for p in comp.pixels]
    try:
        hull = convex_hull(pix)
    except DegenerateHullError:
        return 0.0
    members = set(pix)
    worst = 0.0
    i0, j0 = comp.pixels.min(axis=0)
    i1, j1 = comp.pixels.max(axis=0)
    free = ~raster.in_amoeba
    for i in range(i0, i1 + 1):
        for j in range(j0, j1 + 1):
            slacks = hull.facet_slacks((i, j))
            if min(slacks) < 0 or not free[i, j] or (i, j) in members:
                continue
            dist = min(s / math.hypot(*n) for s, (n, _) in zip(slacks, hull.facets))
            worst = max(worst, dist)
    return worst


def test_components_are_convex_up_to_a_pixel(hole_raster):
    for comp in complement_components(hole_raster):
        assert _component_hull_excess(comp, hole_raster) <= 1.5


# ---------------------------------------------------------------------------
# properties


@st.composite
def small_polys(draw):
    pts = draw(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=3, max_size=6, unique=True))
    try:
        convex_hull(pts)
    except DegenerateHullError:
        assume(False)
    coeffs = {p: draw(st.floats(0.2, 5.0)) * complex(math.cos(a), math.sin(a))
              for p, a in zip(pts, draw(st.lists(st.floats(0, 6.28), min_size=len(pts), max_size=len(pts))))}
    return LaurentPolynomial.from_dict(coeffs)


@settings(max_examples=25)
@given(small_polys(), st.integers(24, 96))
def test_root_points_are_never_lopsided(f, res):
    assume(np.ptp(f.exponents[:, 1]) > 0)
    r = raster_2d(f, default_box(f), (res, res), 16)
    assert not ((r.verdicts == Verdict.IN_AMOEBA) & (r.certificates >= 0)).any()
    assert (r.samples[r.in_amoeba] >= 1).all()
    # exact roots of a few fibres, mapped through Log, fail the lopsidedness test
    x1 = float(r.centers()[0][res // 2])
    for th in (0.3, 2.0, 4.4):
        z1 = math.exp(x1) * complex(math.cos(th), math.sin(th))
        lo = int(f.exponents[:, 1].min())
        d = int(f.exponents[:, 1].max()) - lo
        poly = np.zeros(d + 1, dtype=complex)
        for (a1, a2), c in f.terms:
            poly[d - (a2 - lo)] += c * z1**a1
        for root in np.roots(poly):
            if root != 0:
                assert lopsided_certificate(f, (x1, math.log(abs(root)))) is None


@settings(max_examples=8)
@given(small_polys())
def test_component_count_bounds_and_injective_orders(f):
    assume(np.ptp(f.exponents[:, 1]) > 0)
    r = raster_2d(f, default_box(f), (256, 256), 64)
    try:
        comps = assign_orders(f, complement_components(r))
    except OrderAssignmentError:
        assume(False)
    poly = newton_polytope(f)
    orders = [c.order for c in comps]
    assert len(set(orders)) == len(orders)
    assert len(poly.vertices) <= len(comps) <= len(lattice_points(poly))
    assert set(poly.vertices) <= set(orders)
