"""Integral kernels of the holomorphic semigroup Omega(gamma_z).

Powers of sinh z use the branch of log sinh z that is real on z > 0 and
analytic on Re z >= 0 away from i pi Z.  This is the branch on which the
kernels agree with their eigenfunction expansions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .dunkl import DeformParams, d_k, harmonic_basis, sphere_mass, vtilde_rank1
from .errors import DomainError, PoleError, ScopeError
from .quadrature import gauss_laguerre, radial_rule
from .sl2 import RadialSector, phi_basis_all, sector_range
from .specfun import (bessel_i_tilde, bessel_j_tilde, gegenbauer_normalized_all,
                      i_fun, laguerre)


@dataclass(frozen=True)
class KernelEval:
    value: complex | np.ndarray
    provenance: str
    bound_ok: bool | None = None


def _check_z(z) -> complex:
    z = complex(z)
    if z.real < 0:
        raise DomainError("Re z >= 0 required")
    if z.real == 0 and math.isclose(math.remainder(z.imag, math.pi), 0.0, abs_tol=1e-15):
        raise PoleError(f"z = {z} lies in i pi Z, where sinh z = 0")
    return z


def log_sinh(z):
    """log sinh z, continued from the positive real axis through Re z >= 0."""
    z = np.asarray(z, dtype=complex)
    return z - math.log(2) + np.log1p(-np.exp(-2 * z))


def coth(z):
    z = np.asarray(z, dtype=complex)
    e = np.exp(-2 * z)
    return (1 + e) / (1 - e)


def alpha_beta(z) -> tuple:
    """alpha(z) = Re coth z and beta(z) = cos y / cosh x for z = x + iy."""
    z = _check_z(z)
    x, y = z.real, z.imag
    den = math.cosh(2 * x) - math.cos(2 * y)
    return math.sinh(2 * x) / den, math.cos(y) / math.cosh(x)


def bound_c(sector: RadialSector, z) -> float:
    """C(k,a,m;z) = 1 / (a^lam Gamma(lam+1) |sinh z|^(lam+1))."""
    lam, a = sector.lam, float(sector.params.a)
    ls = log_sinh(z).real
    return math.exp(-lam * math.log(a) - gammaln(lam + 1) - (lam + 1) * ls)


def lambda_bound(r, s, z, sector: RadialSector):
    a = float(sector.params.a)
    al, be = alpha_beta(z)
    r, s = np.asarray(r, dtype=float), np.asarray(s, dtype=float)
    return (bound_c(sector, z) * (r * s) ** sector.m
            * np.exp(-(r ** a + s ** a) * al * (1 - abs(be)) / a))


def lambda_m(r, s, z, sector: RadialSector) -> KernelEval:
    """Radial kernel of Omega(gamma_z) on sector m.

    (rs)^m a^-lam sinh(z)^-(lam+1) exp(-(r^a+s^a) coth(z)/a) I~_lam(2 (rs)^(a/2) / (a sinh z));
    on Re z = 0 the Bessel factor is the real J~ form.
    """
    z = _check_z(z)
    a = float(sector.params.a)
    lam = sector.lam
    r, s = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(s, dtype=float))
    if np.any(r < 0) or np.any(s < 0):
        raise DomainError("r, s >= 0 required")
    ls = complex(log_sinh(z))
    rs = r * s
    lead = (-lam * math.log(a) - (lam + 1) * ls
            - (r ** a + s ** a) * complex(coth(z)) / a)
    if z.real == 0:
        v = (2 / a) * rs ** (a / 2) / math.sin(z.imag)
        bes = bessel_j_tilde(lam, v, scaled=True)
        val = np.exp(lead) * bes
    else:
        w = (2 / a) * rs ** (a / 2) * np.exp(-ls)
        bes = bessel_i_tilde(lam, w, scaled=True)
        val = np.exp(lead + np.abs(np.real(w))) * bes
    val = val * rs ** sector.m
    ok = None
    if lam >= -0.5:
        ok = bool(np.all(np.abs(val) <= lambda_bound(r, s, z, sector) * (1 + 1e-12)))
    return KernelEval(val[()] if np.ndim(val) == 0 else val, "closed_form", ok)


def lambda_m_series(r, s, z, sector: RadialSector, l_max: int = 60):
    """sum_{l <= l_max} f_{l,m}(r) f_{l,m}(s) exp(-z (2l + lam + 1))."""
    z = complex(z)
    fr = phi_basis_all(l_max, sector, r)
    fs = phi_basis_all(l_max, sector, s)
    ls = np.arange(l_max + 1)
    ph = np.exp(-z * (2 * ls + sector.lam + 1)).reshape((-1,) + (1,) * (fr.ndim - 1))
    return np.sum(fr * fs * ph, axis=0)


# ----------------------------------------------------------------- profile

def _nu(params: DeformParams) -> float:
    return float(params.index) + (params.dim - 2) / 2


def h_profile(r, s, z, t, params: DeformParams, method: str = "auto") -> complex:
    """h_{k,a}(r, s; z; t), the profile whose Gegenbauer coefficients are the Lambda^(m).

    ``method`` is "closed" (a in {1, 2}), "series" (the I(2/a, nu; w; t) sum)
    or "auto" (closed where available).
    """
    z = _check_z(z)
    if not 2 * params.index + params.dim > max(1, 2 - float(params.a)):
        raise DomainError("2<k> + N > max(1, 2 - a) violated")
    a = float(params.a)
    ls = complex(log_sinh(z))
    pre = np.exp(-(r ** a + s ** a) * complex(coth(z)) / a - float(params.mu) / a * ls)
    if method == "auto":
        method = "closed" if a in (1.0, 2.0) else "series"
    if method == "closed":
        if a == 2.0:
            return complex(pre * np.exp(r * s * t * np.exp(-ls)))
        if a == 1.0:
            nu = float(params.index) + (params.dim - 3) / 2
            w = math.sqrt(2 * r * s * (1 + t)) * np.exp(-ls)
            return complex(pre * math.exp(gammaln(nu + 1)) * bessel_i_tilde(nu, w))
        raise ScopeError("closed profile exists only for a = 1, 2")
    w = 2 * (r * s) ** (a / 2) / a * np.exp(-ls)
    return complex(pre * i_fun(2 / a, _nu(params), w, t).value)


def gegenbauer_profile_constant(params: DeformParams) -> float:
    """d_k / c_{k,a} = a^((2<k>+N-2)/a) Gamma((2<k>+N+a-2)/a)."""
    a = float(params.a)
    return math.exp((2 * float(params.index) + params.dim - 2) / a * math.log(a)
                    + gammaln(float(params.mu) / a))


# ------------------------------------------------------------ full kernels

def c_ka(params: DeformParams) -> float:
    """Closed form a^-((2<k>+N-2)/a) Gamma(mu/a)^-1 d_k."""
    return d_k(params) / gegenbauer_profile_constant(params)


def c_ka_quadrature(params: DeformParams, n_radial: int = 40, n_sphere: int = 12) -> float:
    """1 / integral of exp(-|x|^a/a) theta_{k,a}, with Gauss rules in r and on the sphere."""
    from .dunkl import sphere_rule
    a = float(params.a)
    rule = radial_rule(n_radial, params, m=0)
    radial = float(np.sum(rule.weights * np.exp(rule.nodes ** a / a)))
    _, w = sphere_rule(params, n_sphere)
    return 1.0 / (radial * float(np.sum(w)))


def poisson_kernel(m: int, omega, eta, params: DeformParams, method: str = "closed"):
    """Reproducing kernel of the degree-m k-harmonics on the sphere.

    "closed" uses the Gegenbauer form (N = 1, or k = 0); "basis" sums
    h_j(omega) h_j(eta) / d_k over an orthonormal basis and works for all k.
    """
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    eta = np.atleast_1d(np.asarray(eta, dtype=float))
    if method == "basis":
        basis = harmonic_basis(m, params, normalized=False)
        if not basis:
            return 0.0
        val = sum(float(h(omega)) * float(h(eta)) for h in basis)
        return val * sphere_mass(params)
    nu = _nu(params)
    if params.dim == 1:
        if m > 1:
            return 0.0
        k = float(params.k[0])
        if k == 0:
            return float(gegenbauer_normalized_all(m, -0.5, omega[0] * eta[0])[m]) if m else 1.0
        h = lambda t: gegenbauer_normalized_all(m, nu, t)[m]
        return float(vtilde_rank1(h, omega[0], eta[0], k))
    if not params.k_zero:
        raise ScopeError("closed Poisson kernel needs N = 1 or k = 0; use method='basis'")
    t = float(np.clip(omega @ eta, -1, 1))
    return float(gegenbauer_normalized_all(m, nu, t)[m])


def _polar(x, dim):
    x = np.asarray(x, dtype=float).reshape(dim)
    r = float(np.linalg.norm(x))
    return r, (x / r if r > 0 else np.eye(dim)[0])


def lambda_full(x, y, z, params: DeformParams) -> KernelEval:
    """Lambda_{k,a}(x, y; z) on R^N x R^N in the closed scopes (N = 1, or k = 0)."""
    z = _check_z(z)
    a = float(params.a)
    if params.dim == 1:
        k = float(params.k[0])
        if not 2 * k > 1 - a:
            raise DomainError("2k > 1 - a violated")
        xv, yv = float(np.ravel(x)[0]), float(np.ravel(y)[0])
        ls = complex(log_sinh(z))
        lam0 = (2 * k - 1) / a
        lam1 = (2 * k + 1) / a
        w = (2 / a) * abs(xv * yv) ** (a / 2) * np.exp(-ls)
        lead = -(abs(xv) ** a + abs(yv) ** a) * complex(coth(z)) / a - (lam0 + 1) * ls
        if z.real == 0:
            v = (2 / a) * abs(xv * yv) ** (a / 2) / math.sin(z.imag)
            b0 = bessel_j_tilde(lam0, v, scaled=True)
            b1 = bessel_j_tilde(lam1, v, scaled=True)
            shift = 0.0
        else:
            b0 = bessel_i_tilde(lam0, w, scaled=True)
            b1 = bessel_i_tilde(lam1, w, scaled=True)
            shift = abs(w.real)
        odd = xv * yv * np.exp(-(2 / a) * ls - (2 / a) * math.log(a))
        val = math.exp(gammaln(lam0 + 1)) * np.exp(lead + shift) * (b0 + odd * b1)
        return KernelEval(complex(val), "closed_form", None)
    if not params.k_zero:
        raise ScopeError("closed kernel needs N = 1 or k = 0; use lambda_sector_sum")
    r, om = _polar(x, params.dim)
    s, et = _polar(y, params.dim)
    t = float(np.clip(om @ et, -1, 1))
    return KernelEval(h_profile(r, s, z, t, params), "closed_form" if a in (1.0, 2.0) else "series")


def lambda_sector_sum(x, y, z, params: DeformParams, m_max: int = 30) -> KernelEval:
    """a^((2<k>+N-2)/a) Gamma(mu/a) sum_{m <= m_max} Lambda^(m)(r,s;z) P_{k,m}(omega, eta).

    Works for every k by using the basis form of the Poisson kernel.
    """
    z = _check_z(z)
    r, om = _polar(x, params.dim)
    s, et = _polar(y, params.dim)
    method = "closed" if params.dim == 1 or params.k_zero else "basis"
    total = 0j
    for m in sector_range(params, m_max):
        lm = lambda_m(r, s, z, RadialSector(m, params)).value
        total += complex(lm) * poisson_kernel(m, om, et, params, method)
    return KernelEval(total * gegenbauer_profile_constant(params), "series", None)


# ------------------------------------------------------------ verifications

def _radial_integral(fun, params, m, z_rate, n):
    """Integral of fun(s) s^(2m) s^(2<k>+N+a-3) ds with decay rate z_rate in s^a."""
    rule = radial_rule(n, params, m=m, rate=z_rate)
    s = rule.nodes
    return np.sum(rule.weights * fun(s) * np.exp(z_rate * s ** float(params.a)))


def eigenrelation_residual(l: int, z, sector: RadialSector, r, n: int = 120) -> float:
    """Relative L2 error of int Lambda^(m)(r,s;z) f_l(s) s^(..) ds vs exp(-z(2l+lam+1)) f_l(r)."""
    z = _check_z(z)
    a = float(sector.params.a)
    m = sector.m
    rate = (1 + float(np.real(coth(z)))) / a
    r = np.atleast_1d(np.asarray(r, dtype=float))
    rule = radial_rule(n, sector.params, m=m, rate=rate)
    s = rule.nodes
    fl = phi_basis_all(l, sector, s)[l]
    ker = lambda_m(r[:, None], s[None, :], z, sector).value
    lhs = (ker * (fl * np.exp(rate * s ** a) / s ** (2 * m))) @ rule.weights
    rhs = np.exp(-z * (2 * l + sector.lam + 1)) * phi_basis_all(l, sector, r)[l]
    return float(np.linalg.norm(lhs - rhs) / np.linalg.norm(rhs))


def semigroup_kernel_law(r, rp, z1, z2, sector: RadialSector, n: int = 160) -> float:
    """Relative residual of int Lambda(r,s;z1) Lambda(s,r';z2) s^(..) ds = Lambda(r,r';z1+z2)."""
    z1, z2 = _check_z(z1), _check_z(z2)
    if z1.real <= 0 or z2.real <= 0:
        raise DomainError("Re z1, Re z2 > 0 required")
    a = float(sector.params.a)
    m = sector.m
    rate = float(np.real(coth(z1) + coth(z2))) / a
    rule = radial_rule(n, sector.params, m=m, rate=rate)
    s = rule.nodes
    k1 = lambda_m(r, s, z1, sector).value
    k2 = lambda_m(s, rp, z2, sector).value
    lhs = np.sum(rule.weights * k1 * k2 * np.exp(rate * s ** a) / s ** (2 * m))
    rhs = complex(lambda_m(r, rp, z1 + z2, sector).value)
    return float(abs(lhs - rhs) / abs(rhs))


def _rotated_laguerre(delta, nu, n):
    """Nodes T (rotated onto arg T = -arg delta) and weights for int e^(-delta T) T^nu g(T) dT."""
    delta = complex(delta)
    phi = np.angle(delta)
    mod = abs(delta)
    rule = gauss_laguerre(n, nu)
    u = rule.nodes / mod
    rot = np.exp(-1j * phi)
    t = rot * u
    w = rule.weights * rot ** (nu + 1) / mod ** (nu + 1)
    return t, w


def weber_first(delta, alpha, beta, nu, n: int = 160) -> tuple:
    """(quadrature, closed form) for int e^(-delta T) J_nu(2 alpha sqrt T) J_nu(2 beta sqrt T) dT."""
    delta = complex(delta)
    if not abs(np.angle(delta)) < math.pi / 2:
        raise DomainError("|arg delta| < pi/2 required")
    if nu < 0:
        raise DomainError("nu >= 0 required")
    t, w = _rotated_laguerre(delta, nu, n)
    rt = np.sqrt(t)
    g = bessel_j_tilde(nu, 2 * alpha * rt) * bessel_j_tilde(nu, 2 * beta * rt)
    lhs = (alpha * beta) ** nu * np.sum(w * g)
    rhs = (np.exp(-(alpha ** 2 + beta ** 2) / delta) / delta * (alpha * beta / delta) ** nu
           * bessel_i_tilde(nu, 2 * alpha * beta / delta))
    return complex(lhs), complex(rhs)


def weber_second(delta, alpha, beta, nu, l, n: int = 160) -> tuple:
    """(quadrature, closed form) for int e^(-delta T) L_l^nu(alpha T) J_nu(beta sqrt T) T^(nu/2) dT."""
    delta = complex(delta)
    if not delta.real > 0 or not nu > 0:
        raise DomainError("Re delta > 0 and nu > 0 required")
    if abs(alpha - delta) < 1e-12:
        raise DomainError("alpha != delta required")
    t, w = _rotated_laguerre(delta, nu, n)
    g = laguerre(l, nu, alpha * t) * bessel_j_tilde(nu, beta * np.sqrt(t))
    lhs = (beta / 2) ** nu * np.sum(w * g)
    rhs = ((delta - alpha) ** l * beta ** nu / (2 ** nu * delta ** (nu + l + 1))
           * np.exp(-beta ** 2 / (4 * delta))
           * laguerre(l, nu, alpha * beta ** 2 / (4 * delta * (alpha - delta))))
    return complex(lhs), complex(rhs)


def weber_check(delta, alpha, beta, nu, l: int = 1, n: int = 160) -> dict:
    """Relative residuals of both exponential Bessel integrals."""
    out = {}
    q, c = weber_first(delta, alpha, beta, nu, n)
    out["first"] = abs(q - c) / abs(c)
    if nu > 0:
        q, c = weber_second(delta, alpha, beta, nu, l, n)
        out["second"] = abs(q - c) / abs(c)
    return out
