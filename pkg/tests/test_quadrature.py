import math

import numpy as np
import pytest
from scipy import special

from betaone.quadrature import (
    QuadratureError,
    composite_rule,
    gauss_legendre_rule,
    integrate_halfplane,
    integrate_line,
    truncation_radius,
)

SQRT_2PI = math.sqrt(2.0 * math.pi)


def test_rule_integrates_constants_exactly():
    rule = gauss_legendre_rule(8, -1.5, 2.25)
    assert np.isclose(rule.integrate(lambda x: np.ones_like(x)), 3.75, rtol=0, atol=1e-12)
    assert np.isclose(rule.integrate(lambda x: 1.0), 3.75, rtol=0, atol=1e-12)


def test_rule_invariants():
    rule = gauss_legendre_rule(12, 0.0, 1.0)
    assert rule.nodes.size == 12
    assert np.all(rule.weights > 0.0)
    with pytest.raises(ValueError):
        gauss_legendre_rule(1, 0.0, 1.0)


def test_composite_rule_concatenates_panels():
    rule = composite_rule([-2.0, 0.5, 3.0], 6)
    assert rule.nodes.size == 12
    assert rule.domain == (-2.0, 3.0)
    assert np.isclose(rule.integrate(lambda x: x), 0.5 * (9.0 - 4.0), rtol=0, atol=1e-12)


def test_truncation_radius_bounds_weighted_tail():
    for degree in [0, 4, 12, 30]:
        T = truncation_radius(degree)
        assert T ** degree * math.exp(-0.5 * T * T) < 1e-14


def test_gaussian_integral():
    value = integrate_line(lambda x: np.exp(-0.5 * x * x))
    assert np.isclose(value, SQRT_2PI, rtol=0, atol=1e-12)


def test_gaussian_second_moment():
    value = integrate_line(lambda x: x * x * np.exp(-0.5 * x * x), degree=2)
    assert np.isclose(value, SQRT_2PI, rtol=0, atol=1e-12)


def test_sign_kink_with_breakpoint_matches_erf_form():
    a = 0.3
    value = integrate_line(
        lambda x: np.sign(x - a) * np.exp(-0.5 * x * x), breakpoints=[a]
    )
    expected = -SQRT_2PI * special.erf(a / math.sqrt(2.0))
    assert np.isclose(value, expected, rtol=0, atol=1e-12)


def test_breakpoint_keeps_smooth_convergence_rate():
    # with the kink isolated at a panel edge the coarsest refinement
    # level already resolves the integral to near machine precision
    a = -0.7
    expected = SQRT_2PI * special.erf(a / math.sqrt(2.0))
    rule = composite_rule([-truncation_radius(0), a, truncation_radius(0)], 32)
    value = rule.integrate(lambda x: np.sign(a - x) * np.exp(-0.5 * x * x))
    assert np.isclose(value, expected, rtol=0, atol=1e-13)


def test_linearity_on_random_weighted_polynomials():
    rng = np.random.default_rng(20240817)
    for _ in range(10):
        c1 = rng.normal(size=4)
        c2 = rng.normal(size=3)
        alpha, beta = rng.normal(size=2)
        f = lambda x: np.polyval(c1, x) * np.exp(-0.5 * x * x)
        g = lambda x: np.polyval(c2, x) * np.exp(-0.5 * x * x)
        combined = integrate_line(lambda x: alpha * f(x) + beta * g(x), degree=4)
        separate = alpha * integrate_line(f, degree=4) + beta * integrate_line(g, degree=4)
        assert np.isclose(combined, separate, rtol=1e-12, atol=1e-12)


def test_undeclared_kink_raises_with_estimate():
    with pytest.raises(QuadratureError) as info:
        integrate_line(
            lambda x: np.sign(x - 0.3) * np.exp(-0.5 * x * x), tol=1e-13
        )
    err = info.value
    expected = -SQRT_2PI * special.erf(0.3 / math.sqrt(2.0))
    assert abs(err.estimate - expected) < 0.05
    assert err.error > 1e-13


def test_halfplane_gaussian():
    value = integrate_halfplane(lambda x, y: np.exp(-x * x - y * y))
    assert np.isclose(value, 0.5 * math.pi, rtol=0, atol=1e-10)


def test_halfplane_zero_integrand():
    assert integrate_halfplane(lambda x, y: np.zeros_like(x)) == 0.0


def test_halfplane_handles_scalar_returns():
    value = integrate_halfplane(lambda x, y: 0.0)
    assert value == 0.0
