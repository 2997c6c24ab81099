import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from amoebakit.laurent import parse_laurent
from amoebakit.ronkin import (
    QuadratureBudgetError,
    QuadratureSpec,
    Scheme,
    dominance_threshold,
    ft_bound_check,
    phi_lower_bound,
    ronkin_estimate,
    ronkin_gradient,
    ronkin_many,
    spine_constants,
    threshold_terms,
    torus_log_average,
    tropical_majorant,
)
from amoebakit.tropical import Lifting, trop_eval

from oracles import argmax_scan_threshold

TRIANGLE = parse_laurent("1 + z1 + z2", 2)
# Mahler measure of 1 + x + y, 3*sqrt(3)/(4*pi) * L(2, chi_{-3})
MAHLER_1XY = 0.3230659472194505


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(nodes_per_angle=8)
    with pytest.raises(ValueError):
        QuadratureSpec(Scheme.MONTE_CARLO, samples=100)
    assert QuadratureSpec.default_for(2).scheme is Scheme.TENSOR_GRID
    assert QuadratureSpec.default_for(3).scheme is Scheme.MONTE_CARLO


@pytest.mark.parametrize("x", [(-1.5, 2.0), (0.0, 0.0), (40.0, -33.0)])
def test_monomial_is_exact(x):
    f = parse_laurent("3*z1^2*z2", 2)
    v = ronkin_estimate(f, x)
    assert v.value == pytest.approx(math.log(3) + 2 * x[0] + x[1], abs=1e-13)
    assert v.std_error == 0
    assert np.array_equal(ronkin_gradient(f, x, h=0.37), np.array([2.0, 1.0]))


@pytest.mark.parametrize("x", [-3, -2, -0.5, 0.5, 2, 3])
def test_jensen_formula_in_one_variable(x):
    assert ronkin_estimate(parse_laurent("1 + z1", 1), [x]).value == pytest.approx(max(0, x), abs=1e-3)


def test_triangle_values_and_gradients():
    assert ronkin_estimate(TRIANGLE, (10, 0)).value == pytest.approx(10, abs=1e-3)
    assert ronkin_estimate(TRIANGLE, (0, 0)).value == pytest.approx(MAHLER_1XY, abs=1e-4)
    assert np.allclose(ronkin_gradient(TRIANGLE, (10, 0)), (1, 0), atol=1e-3)
    assert np.allclose(ronkin_gradient(TRIANGLE, (-10, -10)), (0, 0), atol=1e-3)


def test_monte_carlo_reports_error():
    q = QuadratureSpec(Scheme.MONTE_CARLO, samples=20_000, seed=3)
    v = ronkin_estimate(parse_laurent("1 + z1 + z2 + z3", 3), (0.0, 0.0, 0.0), q)
    assert 0 < v.std_error < 0.05
    again = ronkin_estimate(parse_laurent("1 + z1 + z2 + z3", 3), (0.0, 0.0, 0.0), q)
    assert again.value == v.value


def test_discard_budget():
    q = QuadratureSpec()
    mean, _, bad = torus_log_average([(0,), (1,)], np.array([[1.0, 0.5]], dtype=complex), q)
    assert bad[0] == 0 and mean[0] == pytest.approx(0.0, abs=1e-12)
    # an identically zero fibre discards every node
    with pytest.raises(QuadratureBudgetError):
        torus_log_average([(0,), (0,)], np.array([[1.0, -1.0]], dtype=complex), q)


def test_spine_constants_examples():
    f = parse_laurent("3*z1^2*z2", 2)
    L = spine_constants(f, [((2, 1), (0.3, -0.7))])
    assert -L[(2, 1)] == pytest.approx(math.log(3), abs=1e-13)
    one = spine_constants(parse_laurent("1 + z1", 1), [((0,), [-5.0]), ((1,), [5.0])])
    assert one[(0,)] == pytest.approx(0, abs=1e-3) and one[(1,)] == pytest.approx(0, abs=1e-3)
    five = spine_constants(parse_laurent("5 + z1", 1), [((0,), [-5.0]), ((1,), [5.0])])
    assert -five[(0,)] == pytest.approx(math.log(5), abs=1e-3)
    assert -five[(1,)] == pytest.approx(0, abs=1e-3)
    # the spine vertex sits where both pieces tie: x = log 5
    assert trop_eval(five, [math.log(5)])[1] == {(0,), (1,)}


def test_bound_check_monomial_and_unit_triangle():
    mono = ft_bound_check(parse_laurent("2*z1*z2^3", 2), {(1, 3): 0.7}, [0.1, 0.01], [[0, 0], [3, -4]])
    assert mono.gaps == pytest.approx([0, 0], abs=1e-12)
    grid = np.stack(np.meshgrid(np.linspace(-5, 5, 11), np.linspace(-5, 5, 11)), -1).reshape(-1, 2)
    flat = ft_bound_check(TRIANGLE, {e: 0 for e in TRIANGLE.support}, [0.2], grid)
    assert flat.max_gap <= math.log(3)
    assert flat.rows[0].within_bound


def test_bound_check_gaps_are_uniform_in_t():
    grid = np.stack(np.meshgrid(np.linspace(-8, 8, 9), np.linspace(-8, 8, 9)), -1).reshape(-1, 2)
    rep = ft_bound_check(TRIANGLE, {(0, 0): 0, (1, 0): 1, (0, 1): 1},
                         [math.exp(-2), math.exp(-4), math.exp(-6)], grid)
    assert rep.spread <= 2
    assert all(r.within_bound for r in rep.rows)


def test_bound_check_warns_off_sparse_input():
    f = parse_laurent("1 + z1^2 + z2^2 + z1*z2", 2)
    with pytest.warns(UserWarning, match="maximally sparse"):
        rep = ft_bound_check(f, {e: 0 for e in f.support}, [0.1], [[0.0, 0.0]])
    assert rep.warnings


def test_phi_examples():
    assert phi_lower_bound((0, 0), {(0, 0): 2.5}).minimum == pytest.approx(math.log(2.5))
    one = phi_lower_bound((0,), {(0,): 1, (1,): 1}, trials=64)
    assert one.minimum == pytest.approx(0, abs=0.05)
    tri = phi_lower_bound((0, 0), {(0, 0): 1, (1, 0): 1, (0, 1): 1}, trials=64)
    assert math.isfinite(tri.minimum) and tri.minimum >= -1
    with pytest.raises(ValueError):
        phi_lower_bound((0,), {(0,): 0, (1,): 1})


def test_threshold_examples():
    L = Lifting({(0,): 0, (1,): 0})
    assert dominance_threshold([0], [1], L, 0.1, (1,)) == 0
    # A = <alpha1 - alpha, x0> = -2 with B = 0 and delta = 1
    assert dominance_threshold([-2], [1], L, 0.1, (1,)) == pytest.approx(2)
    terms = threshold_terms([-2], [1], L, 0.1, (1,))
    assert terms[(0,)]["A"] == -2 and terms[(0,)]["delta"] == 1
    with pytest.raises(ValueError, match="strictly maximal"):
        dominance_threshold([0, 0], [1, 0], Lifting({(0, 0): 0, (1, 0): 0, (1, 1): 0}), 0.1, (1, 0))


def test_threshold_matches_scan_with_mixed_signs():
    heights = {(0, 0): 0.5, (2, 1): -1.0, (1, 3): 2.0, (4, 0): 1.5}
    L = Lifting(heights)
    x0, v, t = [1.0, -2.0], [1.0, 0.1], 0.05
    s0 = dominance_threshold(x0, v, L, t, (4, 0))
    scan = argmax_scan_threshold(x0, v, heights, math.log(t), (4, 0), s_max=s0 + 5)
    assert abs(s0 - scan) <= 1e-3


# ---------------------------------------------------------------------------
# properties

@given(st.lists(st.floats(-4, 4), min_size=4, max_size=4), st.floats(0, 1))
def test_ronkin_is_convex(xy, lam):
    f = parse_laurent("2 + z1^2 + (0.5-1i)*z2 + 3*z1*z2^-1", 2)
    x, y = np.array(xy[:2]), np.array(xy[2:])
    vals = ronkin_many(f, [x, y, lam * x + (1 - lam) * y])
    slack = 3 * (sum(v.std_error for v in vals) + 1e-6)
    assert vals[2].value <= lam * vals[0].value + (1 - lam) * vals[1].value + slack


@given(st.lists(st.floats(-6, 6), min_size=2, max_size=2))
def test_ronkin_is_below_majorant_plus_log_coefficient_sum(x):
    f = parse_laurent("2 + z1^2 + (0.5-1i)*z2 + 3*z1*z2^-1", 2)
    v = ronkin_estimate(f, x)
    bound = tropical_majorant(f, [x])[0] + math.log(sum(abs(c) for c in f.coefficients))
    assert v.value <= bound + 3 * v.std_error + 1e-9


@given(st.sampled_from([(1, 0), (0, 1), (0, 0)]), st.floats(1, 6), st.floats(0, 2 * math.pi))
def test_gradient_rounds_away_from_spine(order, r, ang):
    # the spine of 1 + z1 + z2 is the tropical line at the origin; stay >= 1 from it
    direction = {(1, 0): (1, 0), (0, 1): (0, 1), (0, 0): (-1, -1)}[order]
    x = np.array(direction, float) * (r + 1.5) + 0.3 * np.array([math.cos(ang), math.sin(ang)])
    g = ronkin_gradient(TRIANGLE, x)
    assert np.linalg.norm(g - np.array(order)) < 0.25


@given(st.lists(st.floats(-3, 3), min_size=2, max_size=2), st.floats(0.01, 0.36), st.data())
def test_argmax_is_alpha1_past_threshold(x0, t, data):
    pts = [(0, 0), (3, 1), (1, 2), (2, -1)]
    heights = {p: data.draw(st.floats(-2, 2)) for p in pts}
    L = Lifting(heights)
    v = np.array([1.0, 0.2])
    s0 = dominance_threshold(x0, v, L, t, (3, 1))
    scaled = L.scaled(-math.log(t))
    for extra in (1e-6, 0.5, 3.0):
        _, arg = trop_eval(scaled, list(np.asarray(x0) + (s0 + extra) * v))
        assert arg == {(3, 1)} or extra < 1e-3
