import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from kafourier.dunkl import DeformParams
from kafourier.errors import DomainError
from kafourier.quadrature import gauss_gegenbauer, gauss_jacobi, gauss_laguerre, radial_rule


@pytest.mark.parametrize("n,lam", [(1, 0.0), (5, -0.4), (20, 2.5), (64, 0.3)])
def test_laguerre_matches_scipy_roots(n, lam):
    x, w = special.roots_genlaguerre(n, lam)
    rule = gauss_laguerre(n, lam)
    np.testing.assert_allclose(rule.nodes, x, rtol=1e-12)
    # Golub-Welsch weights are accurate relative to the largest weight only
    np.testing.assert_allclose(rule.weights, w, rtol=1e-9, atol=1e-14 * w.max())


@pytest.mark.parametrize("n,alpha,beta", [(3, 0.0, 0.0), (12, -0.5, 1.5), (30, 2.0, -0.7)])
def test_jacobi_matches_scipy_roots(n, alpha, beta):
    x, w = special.roots_jacobi(n, alpha, beta)
    rule = gauss_jacobi(n, alpha, beta)
    np.testing.assert_allclose(rule.nodes, x, atol=1e-13)
    np.testing.assert_allclose(rule.weights, w, rtol=1e-10)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(2, 30), lam=st.floats(-0.9, 6))
def test_laguerre_moments_exact(n, lam):
    """Exact for t^j, j <= 2n-1: integral of t^(lam+j) e^-t is Gamma(lam+j+1).

    High moments weight the tail nodes, whose weights carry only absolute
    accuracy, so the check stops at degree 12.
    """
    rule = gauss_laguerre(n, lam)
    for j in sorted({0, 1, min(n, 12), min(2 * n - 1, 12)}):
        ref = math.exp(math.lgamma(lam + j + 1))
        assert rule.integrate(rule.nodes ** j) == pytest.approx(ref, rel=1e-9)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 25), nu=st.floats(-0.45, 5))
def test_gegenbauer_rule_symmetric(n, nu):
    rule = gauss_gegenbauer(n, nu)
    np.testing.assert_array_equal(rule.nodes, -rule.nodes[::-1])
    mass = math.sqrt(math.pi) * math.exp(math.lgamma(nu + 0.5) - math.lgamma(nu + 1))
    assert rule.weights.sum() == pytest.approx(mass, rel=1e-12)


def test_rules_are_read_only():
    rule = gauss_laguerre(4, 0.0)
    with pytest.raises(ValueError):
        rule.nodes[0] = 1.0


@pytest.mark.parametrize("bad", [(0, 0.0), (3, -1.0)])
def test_laguerre_domain(bad):
    with pytest.raises(DomainError):
        gauss_laguerre(*bad)


@pytest.mark.parametrize("params", [DeformParams(1, 1, 0.6), DeformParams(2, 1.5, 0.3),
                                    DeformParams(3, 2, 0), DeformParams(2, 0.7, (0.2, 1.0))])
@pytest.mark.parametrize("m", [0, 2])
def test_radial_rule_moments(params, m):
    """Integral of r^(a j) exp(-c r^a) r^(2m+2<k>+N+a-3) dr in closed form."""
    a = float(params.a)
    c = 1.7
    rule = radial_rule(12, params, m=m, rate=c)
    s = (2 * m + 2 * params.index + params.dim + a - 2) / a
    for j in range(0, 12):
        ref = math.exp(math.lgamma(s + j) - (s + j) * math.log(c)) / a
        got = np.sum(rule.weights * rule.nodes ** (a * j))
        assert got == pytest.approx(ref, rel=1e-10)


def test_radial_rule_default_rate():
    params = DeformParams(2, 1, 0.5)
    rule = radial_rule(10, params)
    assert rule.measure_tag[-1] == 2.0
    assert len(rule) == 10 and np.all(rule.nodes > 0)
