import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kafourier.dunkl import DeformParams, harmonic_basis
from kafourier.errors import DomainError, PoleError, ScopeError
from kafourier.kernels import (alpha_beta, c_ka, c_ka_quadrature, eigenrelation_residual, h_profile,
                               lambda_bound, lambda_full, lambda_m, lambda_m_series, lambda_sector_sum,
                               poisson_kernel, semigroup_kernel_law, weber_check)
from kafourier.sl2 import RadialSector

z_st = st.builds(complex, st.floats(0.15, 2.0), st.floats(-3.0, 3.0))


def mehler(x, y, z):
    """Hermite semigroup kernel exp((z/2)(d^2/dx^2 - x^2)) times sqrt(2 pi)."""
    sh, ch = cmath.sinh(z), cmath.cosh(z)
    return cmath.exp(-((x * x + y * y) * ch - 2 * x * y) / (2 * sh)) / cmath.sqrt(sh)


@pytest.mark.parametrize("z", [0.3, 1.0 + 0.5j, 0.05 - 2j, 1.2j])
def test_rank_one_a2_is_mehler(z):
    params = DeformParams(1, 2, 0)
    for x, y in [(0.3, -1.2), (2.0, 1.5), (-0.7, -0.4)]:
        got = lambda_full(x, y, z, params).value
        assert abs(got - mehler(x, y, z)) <= 1e-12 * max(1, abs(got))


@settings(max_examples=40, deadline=None)
@given(z=z_st, r=st.floats(0, 3), s=st.floats(0, 3), m=st.integers(0, 1),
       k=st.sampled_from([0.3, 0.6, 1.5]), a=st.sampled_from([0.7, 1, 1.5, 2]))
def test_closed_kernel_matches_series(z, r, s, m, k, a):
    sector = RadialSector(m, DeformParams(1, a, k))
    closed = complex(lambda_m(r, s, z, sector).value)
    series = complex(lambda_m_series(r, s, z, sector, l_max=400))
    assert abs(closed - series) <= 1e-9 * max(1.0, abs(closed))


@settings(max_examples=40, deadline=None)
@given(z=z_st, r=st.floats(0, 4), s=st.floats(0, 4), m=st.integers(0, 3),
       k=st.sampled_from([0, 0.4, 1.0]), a=st.sampled_from([0.5, 1, 2, 3]))
def test_kernel_bound(z, r, s, m, k, a):
    sector = RadialSector(m, DeformParams(3, a, k))
    val = complex(lambda_m(r, s, z, sector).value)
    assert abs(val) <= lambda_bound(r, s, z, sector) * (1 + 1e-10) + 1e-300


@settings(max_examples=30, deadline=None)
@given(z=z_st, seed=st.integers(0, 10_000))
def test_full_kernel_symmetric(z, seed):
    rng = np.random.default_rng(seed)
    x, y = rng.uniform(-2, 2, (2, 2))
    params = DeformParams(2, 1, 0)
    assert abs(lambda_full(x, y, z, params).value - lambda_full(y, x, z, params).value) <= 1e-12


@pytest.mark.parametrize("params", [DeformParams(1, 1, 0.6), DeformParams(1, 1.5, 0.3),
                                    DeformParams(2, 1, 0), DeformParams(3, 2, 0)])
def test_full_kernel_equals_sector_sum(params):
    rng = np.random.default_rng(1)
    for z in (0.6, 0.8 + 1.1j):
        x, y = rng.uniform(-1.5, 1.5, (2, params.dim))
        a = lambda_full(x, y, z, params).value
        b = lambda_sector_sum(x, y, z, params, m_max=40).value
        assert abs(a - b) <= 1e-9 * max(1, abs(a))


def test_general_k_kernel_limits_to_k_zero():
    """The basis Poisson kernel for tiny k approaches the k = 0 closed form."""
    x, y = np.array([0.8, -0.5]), np.array([0.3, 1.1])
    exact = lambda_full(x, y, 0.7, DeformParams(2, 2, 0)).value
    near = lambda_sector_sum(x, y, 0.7, DeformParams(2, 2, (1e-9, 1e-9)), m_max=30).value
    assert abs(exact - near) <= 1e-7


def test_poisson_kernel_reproduces():
    params = DeformParams(2, 1, (0.5, 0.2))
    from kafourier.dunkl import sphere_rule
    pts, wts = sphere_rule(params, 8)
    for m in range(3):
        for h in harmonic_basis(m, params, normalized=False):
            omega = np.array([0.6, 0.8])
            ker = np.array([poisson_kernel(m, omega, e, params, "basis") for e in pts])
            from kafourier.dunkl import d_k
            got = d_k(params) * np.sum(wts * ker * h(pts))
            assert got == pytest.approx(float(h(omega)), abs=1e-11)
    with pytest.raises(ScopeError):
        poisson_kernel(1, [1, 0], [0, 1], params, "closed")


@pytest.mark.parametrize("params", [DeformParams(1, 2, 0.6), DeformParams(2, 1, 0), DeformParams(2, 2, 0.4)])
def test_h_profile_closed_vs_series(params):
    for t in (-0.9, 0.0, 0.7):
        closed = h_profile(0.8, 1.3, 0.5 + 0.4j, t, params, method="closed")
        series = h_profile(0.8, 1.3, 0.5 + 0.4j, t, params, method="series")
        assert abs(closed - series) <= 1e-10 * abs(closed)


def test_z_domain():
    sector = RadialSector(0, DeformParams(1, 1, 0.6))
    with pytest.raises(DomainError):
        lambda_m(1.0, 1.0, -0.1, sector)
    with pytest.raises(PoleError):
        lambda_m(1.0, 1.0, 1j * math.pi, sector)
    with pytest.raises(DomainError, match="2k > 1 - a"):
        lambda_full(1.0, 1.0, 0.5, DeformParams(1, 0.5, 0.2))


def test_alpha_beta():
    al, be = alpha_beta(0.5 + 0.3j)
    assert al == pytest.approx((1 / np.tanh(0.5 + 0.3j)).real)
    assert be == pytest.approx(math.cos(0.3) / math.cosh(0.5))


@pytest.mark.parametrize("params", [DeformParams(1, 1, 0.6), DeformParams(3, 2, 0)])
@pytest.mark.parametrize("z", [0.4, 0.4 + 1j])
def test_eigenrelation(params, z):
    r = np.linspace(0.2, 2.5, 5)
    for l in range(7):
        assert eigenrelation_residual(l, z, RadialSector(1, params), r) <= 1e-8


def test_semigroup_law():
    sector = RadialSector(1, DeformParams(2, 1.5, 0.3))
    assert semigroup_kernel_law(0.7, 1.4, 0.3 + 0.5j, 0.6 - 1.0j, sector) <= 1e-7


@pytest.mark.parametrize("triple", [(1, 1, 0.6), (2, 1.5, (0.3, 0.9)), (3, 0.7, (0.2, 0.4, 0.6))])
def test_c_ka(triple):
    params = DeformParams(*triple)
    assert c_ka_quadrature(params) == pytest.approx(c_ka(params), rel=1e-10)


def test_c_ka_classical_values():
    # a = 2, k = 0: (2 pi)^(-N/2);  a = 1, N = 1, k = 1/2 closed by hand
    for n in (1, 2, 3):
        assert c_ka(DeformParams(n, 2, 0)) == pytest.approx((2 * math.pi) ** (-n / 2))


@pytest.mark.parametrize("delta,alpha,beta,nu", [(1, 1.3, 1, 0.5), (1 + 0.5j, 0.7, 1.2, 0.5),
                                                 (0.8 - 0.6j, 1.5, 0.4, 2.3)])
def test_weber(delta, alpha, beta, nu):
    res = weber_check(delta, alpha, beta, nu, l=2)
    assert max(res.values()) <= 1e-7
