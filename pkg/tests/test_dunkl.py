from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kafourier.dunkl import (DeformParams, PolyND, commutator_checks, d_k, dunkl_apply,
                             dunkl_laplacian, funk_hecke_check, harmonic_basis, harmonic_dimension,
                             intertwiner_rank1, monomials, sphere_inner, sphere_mass, sphere_rule,
                             weight)
from kafourier.errors import DomainError, ScopeError


def random_poly(dim, degree, seed):
    rng = np.random.default_rng(seed)
    terms = {}
    for m in range(degree + 1):
        for e in monomials(dim, m):
            terms[e] = Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4)))
    return PolyND(dim, terms)


# ---------------------------------------------------------------- params

def test_params_validation():
    with pytest.raises(DomainError, match="k_i >= 0"):
        DeformParams(2, 1, -0.1)
    with pytest.raises(DomainError, match="a > 0"):
        DeformParams(2, 0, 0.5)
    with pytest.raises(ScopeError):
        DeformParams(2, 1, 0.5, group="A1")
    with pytest.raises(DomainError):
        DeformParams(2, 1, (0.5,))
    with pytest.raises(DomainError, match="2k > 1 - a"):
        DeformParams(1, 1, 0)


def test_params_derived_quantities():
    p = DeformParams(3, Fraction(2, 3), (Fraction(1, 2), 0, 1))
    assert p.index == Fraction(3, 2)
    assert p.mu == 2 * Fraction(3, 2) + 3 + Fraction(2, 3) - 2
    assert p.lam(2) == pytest.approx((4 + 3 + 1) / (2 / 3))
    assert not p.k_zero and DeformParams(2, 1).k_zero


# -------------------------------------------------------------- operators

@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10_000), dim=st.integers(1, 3),
       k=st.lists(st.floats(0, 2), min_size=3, max_size=3))
def test_dunkl_operator_matches_definition(seed, dim, k):
    """Exact polynomial T_i agrees with d_i f + k_i (f - f o s_i)/x_i at points."""
    params = DeformParams(dim, 2, tuple(k[:dim]))
    f = random_poly(dim, 4, seed)
    f = PolyND(dim, {e: float(c) for e, c in f.terms.items()})
    x = np.random.default_rng(seed).uniform(0.3, 1.5, (5, dim)) * np.sign(
        np.random.default_rng(seed + 1).uniform(-1, 1, (5, dim)))
    for i in range(dim):
        flipped = x.copy()
        flipped[:, i] *= -1
        ref = f.partial(i)(x) + k[i] * (f(x) - f(flipped)) / x[:, i]
        np.testing.assert_allclose(dunkl_apply(f, i, params)(x), ref, rtol=1e-10, atol=1e-10)


@pytest.mark.parametrize("params", [DeformParams(1, 1, Fraction(3, 5)),
                                    DeformParams(2, 2, (Fraction(1, 3), Fraction(5, 2))),
                                    DeformParams(3, 1, (0, Fraction(1, 2), 2))])
def test_commutation_relations_exact(params):
    polys = [random_poly(params.dim, 4, s) for s in range(3)]
    res = commutator_checks(params, polys)
    assert len(res) >= 6
    assert all(v == 0 for v in res.values()), res


def test_laplacian_reduces_at_k_zero():
    params = DeformParams(3, 2, 0)
    f = random_poly(3, 5, 7)
    lap = PolyND(3)
    for i in range(3):
        lap = lap + f.partial(i).partial(i)
    assert dunkl_laplacian(f, params) == lap


# --------------------------------------------------------------- harmonics

@pytest.mark.parametrize("params", [DeformParams(2, 1, 0.5), DeformParams(3, 2, (0.2, 0.0, 1.3)),
                                    DeformParams(4, 1, 0)])
def test_harmonic_basis(params):
    for m in range(4):
        basis = harmonic_basis(m, params)
        assert len(basis) == harmonic_dimension(params.dim, m)
        for p in basis:
            assert p.is_homogeneous() and p.degree == m
            assert dunkl_laplacian(p, params).is_zero(1e-10)
        gram = np.array([[sphere_inner(p, q, params) for q in basis] for p in basis])
        np.testing.assert_allclose(gram, np.eye(len(basis)), atol=1e-11)


def test_rank_one_harmonics():
    params = DeformParams(1, 2, 0.4)
    assert [len(harmonic_basis(m, params)) for m in range(4)] == [1, 1, 0, 0]


@pytest.mark.parametrize("k", [(0.0, 0.0), (0.5, 1.5), (0.2, 0.3, 0.4), (1.0,)])
def test_sphere_rule_mass(k):
    params = DeformParams(len(k), 1, k) if sum(k) or len(k) > 1 else DeformParams(1, 1.5, k)
    _, w = sphere_rule(params, 10)
    assert w.sum() == pytest.approx(sphere_mass(params), rel=1e-13)
    assert d_k(params) * sphere_mass(params) == pytest.approx(1.0)


def test_weight_function():
    params = DeformParams(2, 1, (0.5, 1.0))
    x = np.array([[1.0, 2.0], [-0.5, 0.3]])
    r = np.linalg.norm(x, axis=-1)
    np.testing.assert_allclose(weight(x, params), r ** -1 * np.abs(x[:, 0]) * x[:, 1] ** 2)


# -------------------------------------------------------------- rank one

@settings(max_examples=30, deadline=None)
@given(k=st.fractions(min_value=0, max_value=4, max_denominator=7), seed=st.integers(0, 999))
def test_intertwiner_relation(k, seed):
    """T V_k = V_k d/dx on polynomials in one variable."""
    params = DeformParams(1, 2, k)
    f = random_poly(1, 7, seed)
    lhs = dunkl_apply(intertwiner_rank1(f, k), 0, params)
    rhs = intertwiner_rank1(f.partial(0), k)
    assert lhs == rhs


@pytest.mark.parametrize("params", [DeformParams(1, 1, 0.8), DeformParams(3, 1, 0), DeformParams(2, 2, 0)])
def test_funk_hecke(params):
    def h(t):
        return np.exp(0.7 * t) * (1 + t ** 2)
    for m in range(2 if params.dim == 1 else 3):
        for p in harmonic_basis(m, params):
            assert funk_hecke_check(h, p, params) <= 1e-10
