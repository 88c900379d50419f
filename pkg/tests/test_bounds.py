"""
Tests for supremum estimates, distances, resolvent bounds and the
subordination conversion, including brute-force dominance checks.
"""

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from src import bounds as bd
from src.bounds import RelBound, Subordinate

ORACLE_SAMPLES = 10_000

coef_a = st.floats(min_value=0.0, max_value=3.0)
coef_b = st.floats(min_value=0.0, max_value=0.95)
coord = st.floats(min_value=-10.0, max_value=10.0)
angle = st.floats(min_value=0.0, max_value=1.4)


# =============================================================================
# Models
# =============================================================================

@pytest.mark.parametrize("a,b", [(-1.0, 0.1), (1.0, 1.0), (1.0, -0.1), (math.inf, 0.1)])
def test_relbound_rejects(a, b):
    with pytest.raises(ValueError):
        RelBound(a, b)


def test_relbound_scaled():
    m = RelBound(2.0, 0.5).scaled(0.25)
    assert m.a == pytest.approx(1.0)
    assert m.b == pytest.approx(0.25)
    with pytest.raises(ValueError):
        RelBound(1.0, 0.5).scaled(1.5)


@pytest.mark.parametrize("c,p", [(-1.0, 0.5), (1.0, 1.5), (1.0, -0.1)])
def test_subordinate_rejects(c, p):
    with pytest.raises(ValueError):
        Subordinate(c, p)


def test_perturbation_from_dict():
    assert bd.perturbation_from_dict({'type': 'relbound', 'a': 1, 'b': '0.5'}) == RelBound(1.0, 0.5)
    assert bd.perturbation_from_dict({'type': 'subordinate', 'c': 0.3, 'p': 0.25}) == Subordinate(0.3, 0.25)
    with pytest.raises(ValueError):
        bd.perturbation_from_dict({'type': 'bounded', 'a': 1})


def test_supbound_rejects_negative():
    with pytest.raises(ValueError):
        bd.SupBound(-1.0)


# =============================================================================
# Closed-form values
# =============================================================================

def test_h_value():
    assert bd.h_value(RelBound(1.0, 0.5), 3.0, 1.0) == pytest.approx(0.3125)


def test_h_value_pole():
    with pytest.raises(ValueError):
        bd.h_value(RelBound(1.0, 0.5), 1 + 1j, np.array([0.0, 1 + 1j]))


def test_vertical_exact():
    sup = bd.sup_h_vertical_exact(RelBound(1.0, 0.5), 3.0, 1.0)
    assert sup.value == pytest.approx(0.3125)
    assert sup.exact


def test_gapped_plane_exact():
    sup = bd.sup_h_gapped_plane_exact(RelBound(1.0, 0.3), 0.0, -2.0, 3.0)
    assert sup.value == pytest.approx(0.34)
    assert sup.exact
    with pytest.raises(ValueError):
        bd.sup_h_gapped_plane_exact(RelBound(1.0, 0.3), 4.0, -2.0, 3.0)


def test_sector_tan():
    sup = bd.sup_h_sector_tan(RelBound(1.0, 0.3), 0j, 2.0, math.pi / 6)
    assert sup.value == pytest.approx(0.37)
    with pytest.raises(ValueError):
        bd.sup_h_sector_tan(RelBound(1.0, 0.3), 3.0, 2.0, math.pi / 6)


@pytest.mark.parametrize("z", [-3 + 1j, -0.5 - 2j, 1.5 + 4j])
def test_sector_tan_reduces_to_vertical_at_zero_angle(z):
    m = RelBound(0.7, 0.4)
    assert bd.sup_h_sector_tan(m, z, 2.0, 0.0).value == pytest.approx(
        bd.sup_h_vertical_exact(m, z.real, 2.0).value)


def test_line_and_strip_poles():
    m = RelBound(1.0, 0.5)
    with pytest.raises(ValueError):
        bd.sup_h_line(m, 2 + 1j, 1.0)
    with pytest.raises(ValueError):
        bd.sup_h_strip(m, 0.5j, -1.0, 1.0)
    with pytest.raises(ValueError):
        bd.sup_h_strip_symmetric(m, 0.5j, -1.0, 1.0)


def test_sup_tau_ratio():
    assert bd.sup_tau_ratio(3 + 4j) == pytest.approx(5 / 4)
    assert bd.sup_tau_ratio(2 + 0j) == math.inf


def test_sector_inside_is_inapplicable():
    sup = bd.sup_h_sector_alt(RelBound(1.0, 0.3), 5 + 0.1j, 1.0, 0.5)
    assert sup.value == math.inf
    assert not sup.exact


# =============================================================================
# Sector comparison
# =============================================================================

def _branch_w(z, vertex, theta, branch):
    if branch == 'upper':
        return complex(math.cos(theta), -math.sin(theta)) * (z - vertex)
    return np.conj(complex(math.cos(theta), math.sin(theta)) * (z - vertex))


@settings(max_examples=200, deadline=None)
@given(a=coef_a, b=coef_b, x=coord, y=coord, vertex=coord, theta=angle)
def test_sector_difference_identity(a, b, x, y, vertex, theta):
    m = RelBound(a, b)
    z = complex(x, y)
    for row in bd.compare_sector_estimates(m, z, vertex, theta):
        w = _branch_w(z, vertex, theta, row.branch)
        assume(w.imag > 1e-3)
        expected = -2 * b * b * vertex * math.cos(theta) * w.real / w.imag ** 2
        scale = abs(row.primary) + abs(row.alt)
        assert row.difference == pytest.approx(expected, rel=1e-7, abs=1e-10 * scale)
        if abs(row.difference) > 1e-9 * scale and b > 0:
            assert np.sign(row.difference) == row.predicted


def test_sector_counter_example():
    rows = bd.compare_sector_estimates(RelBound(1.0, 0.3), -1 + 0.5j, 1.0, math.pi / 8)
    upper = next(r for r in rows if r.branch == 'upper')
    assert upper.primary == pytest.approx(0.9776, abs=1e-4)
    assert upper.alt == pytest.approx(0.7947, abs=1e-4)
    assert upper.predicted == 1
    # the primary estimate is not the smaller one here
    assert upper.primary > upper.alt


def test_mirrored_comparison_matches_negated():
    m = RelBound(0.5, 0.4)
    z, vertex, theta = 2 - 1j, 1.0, 0.3
    mirrored = bd.compare_sector_estimates(m, z, vertex, theta, mirrored=True)
    direct = bd.compare_sector_estimates(m, -z, -vertex, theta)
    assert [r.to_dict() for r in mirrored] == [r.to_dict() for r in direct]


# =============================================================================
# Dominance against the sampling oracle
# =============================================================================

@settings(max_examples=40, deadline=None)
@given(a=coef_a, b=coef_b, x=coord, gamma=coord, d=st.floats(min_value=0.05, max_value=10.0),
       above=st.booleans())
def test_line_estimate_dominates(a, b, x, gamma, d, above):
    m = RelBound(a, b)
    z = complex(x, gamma + d if above else gamma - d)
    sup = bd.sup_h_line(m, z, gamma).value
    sampled = bd.oracle_sup(m, z, bd.line_sampler(gamma, scale=1 + abs(x)), ORACLE_SAMPLES)
    assert sampled <= sup * (1 + 1e-12) + 1e-9


@settings(max_examples=40, deadline=None)
@given(a=coef_a, b=coef_b, x=coord, g1=coord, width=st.floats(min_value=0.0, max_value=5.0),
       d=st.floats(min_value=0.05, max_value=10.0))
def test_strip_estimates_dominate(a, b, x, g1, width, d):
    m = RelBound(a, b)
    g2 = g1 + width
    z = complex(x, g2 + d)
    sampler = bd.strip_boundary_sampler(g1, g2, scale=1 + abs(x))
    sampled = bd.oracle_sup(m, z, sampler, ORACLE_SAMPLES)
    assert sampled <= bd.sup_h_strip(m, z, g1, g2).value * (1 + 1e-12) + 1e-9
    assert sampled <= bd.sup_h_strip_symmetric(m, z, g1, g2).value * (1 + 1e-12) + 1e-9


@settings(max_examples=40, deadline=None)
@given(a=coef_a, b=coef_b, x=coord, y=coord, vertex=coord, theta=angle, mirrored=st.booleans())
def test_sector_alt_dominates(a, b, x, y, vertex, theta, mirrored):
    m = RelBound(a, b)
    z = complex(x, y)
    assume(bd.dist_sector(z, vertex, theta, mirrored) > 0.05)
    sup = bd.sup_h_sector_alt(m, z, vertex, theta, mirrored).value
    sampler = bd.sector_boundary_sampler(vertex, theta, mirrored, scale=1 + abs(z - vertex))
    assert bd.oracle_sup(m, z, sampler, ORACLE_SAMPLES) <= sup * (1 + 1e-12) + 1e-9


@settings(max_examples=40, deadline=None)
@given(a=coef_a, b=st.floats(min_value=0.0, max_value=0.6), y=coord, vertex=coord,
       theta=st.floats(min_value=0.0, max_value=0.8), gap=st.floats(min_value=0.05, max_value=10.0))
def test_sector_tan_dominates(a, b, y, vertex, theta, gap):
    m = RelBound(a, b)
    z = complex(vertex - gap, y)
    sup = bd.sup_h_sector_tan(m, z, vertex, theta).value
    sampler = bd.sector_boundary_sampler(vertex, theta, scale=1 + abs(z - vertex))
    assert bd.oracle_sup(m, z, sampler, ORACLE_SAMPLES) <= sup * (1 + 1e-12) + 1e-9


@settings(max_examples=40, deadline=None)
@given(a=coef_a, b=coef_b, mu=coord, gap=st.floats(min_value=0.05, max_value=10.0))
def test_vertical_exact_is_attained(a, b, mu, gap):
    m = RelBound(a, b)
    x = mu - gap
    sup = bd.sup_h_vertical_exact(m, mu, x).value
    sampler = bd.vertical_line_sampler(x, scale=gap)
    sampled = bd.oracle_sup(m, complex(mu, 0.0), sampler, ORACLE_SAMPLES)
    assert sampled <= sup * (1 + 1e-12) + 1e-9
    assert sampled >= sup * (1 - 1e-3)


# =============================================================================
# Distances and resolvent bounds
# =============================================================================

@pytest.mark.parametrize("z,expected", [(-3 + 0j, 3.0), (2 + 1j, 1.0), (1j, 1.0), (5 + 0j, 0.0)])
def test_dist_sector_ray(z, expected):
    assert bd.dist_sector(z, 0.0, 0.0) == pytest.approx(expected)


def test_dist_sector_vectorized():
    zs = np.array([-3 + 0j, 2 + 1j])
    np.testing.assert_allclose(bd.dist_sector(zs, 0.0, 0.0), [3.0, 1.0])


def test_dist_bisector():
    assert bd.dist_bisector(0j, -2.0, 3.0, 0.2) == pytest.approx(2.0)


def test_dist_parabola():
    assert bd.dist_parabola(-3 + 0.25j, 0.0) == pytest.approx(math.sqrt(9 + 0.0625))
    assert bd.dist_parabola(-3 + 2j, 0.0) == pytest.approx(math.sqrt(9 + 2 - 0.25))
    assert bd.dist_parabola(3 + 0.25j, 0.0, mirrored=True) == pytest.approx(math.sqrt(9 + 0.0625))
    with pytest.raises(ValueError):
        bd.dist_parabola(1 + 0j, 0.0)


def test_resolvent_bound():
    assert bd.resolvent_bound(2.0, 0.25) == pytest.approx(1.0)
    assert bd.resolvent_bound(2.0, 1.0) == math.inf
    assert bd.resolvent_bound(0.0, 0.1) == math.inf
    np.testing.assert_allclose(bd.resolvent_bound(np.array([1.0, 2.0]), np.array([0.0, 0.25])), [1.0, 1.0])


# =============================================================================
# Subordination
# =============================================================================

def test_young_constants():
    s = Subordinate(1.0, 0.5)
    assert bd.young_linear_constant(s, 0.5) == pytest.approx(0.5)
    rb = bd.subordination_to_relbound(s, 0.5)
    assert rb.a == pytest.approx(1.0)
    assert rb.b == 0.5


@settings(max_examples=50, deadline=None)
@given(c=st.floats(min_value=0.01, max_value=5.0), p=st.floats(min_value=0.01, max_value=0.9),
       eps=st.floats(min_value=0.05, max_value=0.95),
       x=st.floats(min_value=1e-3, max_value=1e3), tx=st.floats(min_value=1e-3, max_value=1e3))
def test_young_splitting_holds(c, p, eps, x, tx):
    s = Subordinate(c, p)
    lhs = c * x ** (1 - p) * tx ** p
    assert lhs <= bd.young_linear_constant(s, eps) * x + eps * tx + 1e-9 * (1 + lhs)
    rb = bd.subordination_to_relbound(s, eps)
    assert lhs ** 2 <= rb.a ** 2 * x ** 2 + rb.b ** 2 * tx ** 2 + 1e-9 * (1 + lhs ** 2)


@pytest.mark.parametrize("p,eps", [(1.0, 0.5), (0.5, 0.0), (0.5, -1.0)])
def test_young_rejects(p, eps):
    with pytest.raises(ValueError):
        bd.young_linear_constant(Subordinate(1.0, p), eps)
    with pytest.raises(ValueError):
        bd.subordination_to_relbound(Subordinate(1.0, p), eps)


def test_subordination_rejects_eps_above_one():
    with pytest.raises(ValueError):
        bd.subordination_to_relbound(Subordinate(1.0, 0.5), 1.0)


def test_bounded_perturbation_needs_no_splitting():
    assert bd.subordination_to_relbound(Subordinate(0.7, 0.0), 0.3) == RelBound(0.7, 0.0)
