import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kafourier.dunkl import DeformParams
from kafourier.errors import DomainError
from kafourier.sl2 import (RadialSector, SampledRadialFunction, basis_function, expand, fka_apply_spectral,
                           fka_phase, gaussian_spectral, heisenberg_spectral, ladder_matrices,
                           multiplication_matrix, phi_basis_all, semigroup_apply,
                           semigroup_operator_norm, sl2_relation_check, spectrum)
from kafourier.verify import random_spectral

params_st = st.builds(
    lambda dim, a, k: DeformParams(dim, a, k),
    st.integers(1, 3), st.sampled_from([0.5, 1, 1.5, 2, Fraction(2, 3), 3]),
    st.sampled_from([0.3, 0.6, 1.2]))


@settings(max_examples=25, deadline=None)
@given(params=params_st, m=st.integers(0, 3))
def test_sl2_relations(params, m):
    if params.dim == 1 and m > 1:
        m = 1
    res = sl2_relation_check(params, RadialSector(m, params), l_max=16)
    assert max(res.values()) <= 1e-10, res


def test_ladder_structure():
    sector = RadialSector(0, DeformParams(1, 2, 0.5))
    mats = ladder_matrices(sector, 8)
    rho = multiplication_matrix(sector, 8)
    assert np.allclose(rho, rho.T.conj())
    assert np.count_nonzero(np.triu(rho, 2)) == 0
    assert set(mats) == {"K", "N+", "N-", "H", "E+", "E-"}
    # N+ raises, N- lowers: strictly lower and upper bidiagonal
    assert np.count_nonzero(np.triu(mats["N+"])) == 0
    assert np.count_nonzero(np.tril(mats["N-"])) == 0
    np.testing.assert_allclose(np.diag(mats["K"]).real, 2 * np.arange(9) + sector.lam + 1)


@pytest.mark.parametrize("params", [DeformParams(1, 1, 0.6), DeformParams(2, 1, 0.5), DeformParams(3, 2, 0)])
def test_phi_basis_orthonormal(params):
    from kafourier.quadrature import radial_rule
    for m in range(2):
        sector = RadialSector(m, params)
        rule = radial_rule(40, params, m=m)
        r = rule.nodes
        # the rule already carries r^(2m) exp(-(2/a) r^a)
        vals = phi_basis_all(8, sector, r) / (r ** m * np.exp(-r ** float(params.a) / float(params.a)))
        gram = (vals * rule.weights) @ vals.T
        np.testing.assert_allclose(gram, np.eye(9), atol=1e-12)


def test_sector_domain():
    with pytest.raises(DomainError):
        RadialSector(2, DeformParams(1, 1, 0.5))
    with pytest.raises(DomainError):
        RadialSector(-1, DeformParams(2, 1, 0.5))


# ---------------------------------------------------------------- spectrum

def test_spectrum_values():
    params = DeformParams(2, 1, (0.5, 0.5))
    entries = spectrum(params, 6)
    assert [float(e.value) for e in entries] == [3, 5, 5, 7, 7, 7]
    assert spectrum(params, 0) == []


@settings(max_examples=30, deadline=None)
@given(params=params_st, count=st.integers(1, 30))
def test_spectrum_sorted_and_formula(params, count):
    entries = spectrum(params, count)
    values = [float(e.value) for e in entries]
    assert values == sorted(values) and len(entries) == count
    for e in entries:
        expect = 2 * float(params.a) * e.l + 2 * e.m + 2 * float(params.index) + params.dim - 2 + float(params.a)
        assert float(e.value) == pytest.approx(expect)


# ---------------------------------------------------------------- semigroup

@settings(max_examples=30, deadline=None)
@given(params=params_st, z1=st.complex_numbers(max_magnitude=3), z2=st.complex_numbers(max_magnitude=3))
def test_semigroup_law(params, z1, z2):
    z1 = complex(abs(z1.real), z1.imag)
    z2 = complex(abs(z2.real), z2.imag)
    f = random_spectral(params, 4, 2, seed=1)
    lhs = semigroup_apply(semigroup_apply(f, z1), z2).vector()
    rhs = semigroup_apply(f, z1 + z2).vector()
    for key in lhs:
        assert abs(lhs[key] - rhs[key]) <= 1e-12 * max(1.0, abs(f.coeffs[key]))


def test_semigroup_unitary_and_contractive():
    params = DeformParams(2, 1.5, 0.3)
    f = random_spectral(params, 6, 2)
    assert semigroup_apply(f, 2.7j).norm2() == pytest.approx(f.norm2(), rel=1e-13)
    assert semigroup_apply(f, 0.4 + 1j).norm2() < f.norm2()
    assert semigroup_operator_norm(params, 0.4, (6, 2)) == pytest.approx(
        math.exp(-0.4 * (params.lam(0) + 1)))
    with pytest.raises(DomainError):
        semigroup_apply(f, -0.1)


# -------------------------------------------------------------- transform

def test_fka_phases():
    assert fka_phase(DeformParams(2, 1, 0.5), 3, 2) == -5
    assert fka_phase(DeformParams(2, Fraction(2, 3), 0.5), 1, 1) == Fraction(-5, 2)


@pytest.mark.parametrize("a,power,sign", [(1, 2, None), (2, 4, None), (Fraction(1, 2), 2, None)])
def test_finite_powers_identity(a, power, sign):
    params = DeformParams(2, a, 0.5)
    f = random_spectral(params, 5, 3, seed=2)
    g = fka_apply_spectral(f, power)
    assert g.vector() == f.vector()


def test_fka_is_semigroup_value_at_quarter_period():
    """F = exp(i pi mu/(2a)) Omega(i pi/2) on coefficients."""
    params = DeformParams(1, 1.5, 0.4)
    f = random_spectral(params, 5, 1, seed=4)
    lhs = fka_apply_spectral(f).vector()
    rhs = semigroup_apply(f, 0.5j * math.pi).vector()
    phase = np.exp(1j * math.pi * float(params.mu) / (2 * float(params.a)))
    for key in lhs:
        assert abs(lhs[key] - phase * rhs[key]) <= 1e-13 * abs(f.coeffs[key])


# -------------------------------------------------------------- expansion

def test_expand_round_trip():
    params = DeformParams(2, 1, 0.5)
    target = basis_function(params, 3, 1, 1, truncation=(10, 2))
    sampled = SampledRadialFunction.from_function(target, params, 2)
    got = expand(sampled, truncation=(10, 2))
    assert got.defect <= 1e-12
    for key, c in got.coeffs.items():
        assert abs(c - (1.0 if key == (3, 1, 1) else 0.0)) <= 1e-12


def test_gaussian_closed_form_matches_expand():
    params = DeformParams(3, 2, 0)
    c = 0.8
    g = gaussian_spectral(params, c, 40)
    x = np.random.default_rng(0).normal(size=(6, 3))
    np.testing.assert_allclose(g(x), np.exp(-c * np.linalg.norm(x, axis=-1) ** 2), atol=1e-12)


@settings(max_examples=20, deadline=None)
@given(params=params_st, seed=st.integers(0, 1000))
def test_heisenberg_inequality(params, seed):
    f = random_spectral(params, 5, 2, seed=seed)
    lhs, rhs = heisenberg_spectral(f)
    assert lhs >= rhs * (1 - 1e-12)
