"""Rational Dunkl operators for the sign-flip group Z_2^N.

Polynomials are exact coefficient maps; with Fraction multiplicities every
identity below holds with zero residual.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from numbers import Number

import numpy as np
from scipy.linalg import null_space

from .errors import DomainError, ScopeError
from .quadrature import gauss_jacobi
from .specfun import gegenbauer_transform


@dataclass(frozen=True)
class DeformParams:
    """Dimension N, exponent a > 0 and one multiplicity k_i >= 0 per coordinate."""
    dim: int
    a: Number
    k: tuple

    def __init__(self, dim, a, k=0, group="Z2N"):
        if group != "Z2N":
            raise ScopeError(f"only the sign-flip group Z_2^N is supported, not {group}")
        if dim < 1:
            raise DomainError("N >= 1 required")
        ks = tuple(k) if isinstance(k, (tuple, list)) else (k,) * dim
        if len(ks) != dim:
            raise DomainError(f"expected {dim} multiplicities, got {len(ks)}")
        if any(ki < 0 for ki in ks):
            raise DomainError("k_i >= 0 required")
        if not a > 0:
            raise DomainError("a > 0 required")
        object.__setattr__(self, "dim", int(dim))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "k", ks)
        if not self.mu > 0:
            if self.dim == 1:
                raise DomainError(f"2k > 1 - a violated (2k + a - 1 = {float(self.mu):g})")
            raise DomainError(
                f"a + 2<k> + N - 2 > 0 violated (value {float(self.mu):g})")

    @property
    def index(self):
        """<k> = sum of the multiplicities over positive roots."""
        return sum(self.k)

    @property
    def mu(self):
        """Homogeneity constant 2<k> + N + a - 2."""
        return 2 * self.index + self.dim + self.a - 2

    @property
    def k_zero(self) -> bool:
        return all(ki == 0 for ki in self.k)

    def lam(self, m: int) -> float:
        """Sector parameter (2m + 2<k> + N - 2)/a."""
        return float(2 * m + 2 * self.index + self.dim - 2) / float(self.a)

    def supports_kernel(self) -> bool:
        """2<k> + N > max(1, 2 - a), needed for the integral kernels."""
        return 2 * self.index + self.dim > max(1, 2 - self.a)


@dataclass(frozen=True)
class WeightSpec:
    params: DeformParams


def sphere_mass(params: DeformParams) -> float:
    """Integral of prod |w_i|^(2k_i) over the unit sphere: 1/d_k."""
    k = [float(x) for x in params.k]
    logv = (math.log(2) + sum(math.lgamma(ki + 0.5) for ki in k)
            - math.lgamma(sum(k) + params.dim / 2))
    return math.exp(logv)


def d_k(params: DeformParams) -> float:
    return 1.0 / sphere_mass(params)


def weight(x, spec: WeightSpec | DeformParams):
    """theta_{k,a}(x) = |x|^(a-2) prod |x_i|^(2k_i); points along the last axis."""
    params = spec.params if isinstance(spec, WeightSpec) else spec
    x = np.asarray(x, dtype=float)
    if params.dim == 1 and x.ndim == 0:
        x = x[None]
    if x.shape[-1] != params.dim:
        x = x[..., None]
    r = np.linalg.norm(x, axis=-1)
    expo = float(params.a) - 2
    if np.any(r == 0) and (expo + 2 * float(params.index) < 0):
        raise DomainError("weight is singular at x = 0")
    with np.errstate(divide="ignore"):
        out = np.where(r > 0, r ** expo, 0.0 if expo > 0 else (1.0 if expo == 0 else np.inf))
    for i, ki in enumerate(params.k):
        out = out * np.abs(x[..., i]) ** (2 * float(ki))
    if np.any(r == 0) and expo < 0 and float(params.index) > 0:
        out = np.where(r == 0, 0.0, out)
    return out


# ------------------------------------------------------------- polynomials

@dataclass(frozen=True)
class PolyND:
    """Polynomial in ``dim`` variables as {exponent tuple: coefficient}."""
    dim: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for e, c in self.terms.items():
            e = tuple(int(v) for v in e)
            if len(e) != self.dim:
                raise DomainError(f"exponent {e} has length != {self.dim}")
            if c != 0:
                clean[e] = clean.get(e, 0) + c
        object.__setattr__(self, "terms", {e: c for e, c in clean.items() if c != 0})

    @classmethod
    def monomial(cls, exps, coeff=1):
        return cls(len(exps), {tuple(exps): coeff})

    @classmethod
    def const(cls, dim, c=1):
        return cls(dim, {(0,) * dim: c})

    @classmethod
    def coord(cls, dim, i, c=1):
        e = [0] * dim
        e[i] = 1
        return cls(dim, {tuple(e): c})

    def __add__(self, other):
        if isinstance(other, Number):
            other = PolyND.const(self.dim, other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return PolyND(self.dim, t)

    __radd__ = __add__

    def __neg__(self):
        return PolyND(self.dim, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return PolyND(self.dim, {e: c * other for e, c in self.terms.items()})
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return PolyND(self.dim, t)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, PolyND) and (self - other).is_zero()

    def __hash__(self):
        return hash((self.dim, frozenset(self.terms.items())))

    def is_zero(self, tol=0.0) -> bool:
        return all(abs(c) <= tol for c in self.terms.values())

    def max_abs(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def __call__(self, x):
        x = np.asarray(x)
        if self.dim == 1 and (x.ndim == 0 or x.shape[-1] != 1):
            x = x[..., None]
        out = np.zeros(x.shape[:-1], dtype=complex if any(
            isinstance(c, complex) for c in self.terms.values()) else float)
        for e, c in self.terms.items():
            mono = np.ones(x.shape[:-1])
            for i, p in enumerate(e):
                if p:
                    mono = mono * x[..., i] ** p
            out = out + complex(c) * mono if isinstance(c, complex) else out + float(c) * mono
        return out

    def flip(self, i):
        """f o sigma_i."""
        return PolyND(self.dim, {e: (-c if e[i] % 2 else c) for e, c in self.terms.items()})

    def times_coord(self, i):
        return self * PolyND.coord(self.dim, i)

    def partial(self, i):
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                t[tuple(f)] = t.get(tuple(f), 0) + c * e[i]
        return PolyND(self.dim, t)

    def euler(self):
        """E f = sum x_i d_i f."""
        return PolyND(self.dim, {e: c * sum(e) for e, c in self.terms.items()})


def dunkl_apply(f: PolyND, i: int, params: DeformParams) -> PolyND:
    """T_i f = d_i f + k_i (f - f o sigma_i)/x_i, with the quotient taken exactly."""
    ki = params.k[i]
    t = {}
    for e, c in f.terms.items():
        if e[i] == 0:
            continue
        g = list(e)
        g[i] -= 1
        coef = e[i] + (2 * ki if e[i] % 2 else 0)
        t[tuple(g)] = t.get(tuple(g), 0) + c * coef
    return PolyND(f.dim, t)


def dunkl_laplacian(f: PolyND, params: DeformParams) -> PolyND:
    out = PolyND(f.dim)
    for i in range(f.dim):
        out = out + dunkl_apply(dunkl_apply(f, i, params), i, params)
    return out


def monomials(dim: int, m: int):
    """Exponent tuples of total degree m in lexicographic order."""
    return sorted((e for e in itertools.product(range(m + 1), repeat=dim) if sum(e) == m),
                  reverse=True)


def harmonic_dimension(dim: int, m: int) -> int:
    def p(n):
        return math.comb(n + dim - 1, dim - 1) if n >= 0 else 0
    return p(m) - p(m - 2)


# ------------------------------------------------------------ sphere rules

@lru_cache(maxsize=64)
def _sphere_nodes(kk: tuple, n: int):
    """Tensor rule on S^(N-1) for prod |w_i|^(2k_i) d sigma, exact on polynomials
    of degree <= 4n - 1 in each hyperspherical level."""
    dim = len(kk)
    if dim == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    # w = (u, sqrt(1-u^2) w'), weight |u|^(2k_0) (1-u^2)^((N-3)/2 + <k'>)
    beta = (dim - 3) / 2 + sum(kk[1:])
    k0 = kk[0]
    # v = u^2 on [0,1] with weight v^(k0-1/2) (1-v)^beta, mapped to Jacobi on [-1,1]
    rule = gauss_jacobi(n, beta, k0 - 0.5)
    v = (1 + rule.nodes) / 2
    wv = rule.weights / 2 ** (beta + k0 + 0.5)
    u = np.concatenate([np.sqrt(v), -np.sqrt(v)])
    wu = np.concatenate([wv, wv]) / 2
    sub_x, sub_w = _sphere_nodes(kk[1:], n)
    pts = []
    wts = []
    for ui, wi in zip(u, wu):
        s = math.sqrt(max(0.0, 1 - ui * ui))
        pts.append(np.column_stack([np.full(len(sub_w), ui), s * sub_x]))
        wts.append(wi * sub_w)
    return np.vstack(pts), np.concatenate(wts)


def sphere_rule(params: DeformParams, n: int = 24):
    """(points, weights) integrating f(w) prod|w_i|^(2k_i) d sigma(w)."""
    x, w = _sphere_nodes(tuple(float(v) for v in params.k), int(n))
    return x.copy(), w.copy()


def sphere_inner(p, q, params: DeformParams, normalized=True, n=None):
    """<p, q>_k = d_k * integral of p conj(q) theta_k over the sphere."""
    deg = max(getattr(p, "degree", 0), getattr(q, "degree", 0))
    n = n or max(4, deg // 2 + 2)
    x, w = sphere_rule(params, n)
    val = np.sum(w * p(x) * np.conj(q(x)))
    return val * d_k(params) if normalized else val


def _rref_columns(mat, tol=1e-10):
    """Row-reduce the columns of ``mat`` (each column a basis vector)."""
    a = mat.T.copy()
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = r + np.argmax(np.abs(a[r:, c]))
        if abs(a[piv, c]) < tol:
            continue
        a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] / a[r, c]
        for i in range(rows):
            if i != r:
                a[i] -= a[i, c] * a[r]
        r += 1
    return a[:r].T


@lru_cache(maxsize=128)
def _harmonic_basis(params: DeformParams, m: int, normalized: bool):
    dim = params.dim
    mons = monomials(dim, m)
    if dim == 1:
        if m > 1:
            return ()
        raw = [PolyND.monomial((m,))]
    else:
        lower = monomials(dim, m - 2) if m >= 2 else []
        if lower:
            index = {e: j for j, e in enumerate(lower)}
            mat = np.zeros((len(lower), len(mons)))
            for j, e in enumerate(mons):
                for e2, c in dunkl_laplacian(PolyND.monomial(e), params).terms.items():
                    mat[index[e2], j] = float(c)
            ker = _rref_columns(null_space(mat))
        else:
            ker = np.eye(len(mons))
        raw = [PolyND(dim, {e: float(c) for e, c in zip(mons, col) if abs(c) > 1e-14})
               for col in ker.T]
    basis = []
    for p in raw:
        for q in basis:
            p = p - q * sphere_inner(p, q, params, normalized).real
        nrm = math.sqrt(sphere_inner(p, p, params, normalized).real)
        basis.append(p * (1.0 / nrm))
    return tuple(basis)


def harmonic_basis(m: int, params: DeformParams, normalized: bool = True) -> list:
    """Orthonormal basis of the degree-m k-harmonic polynomials.

    ``normalized=True`` uses d_k * integral over the sphere; ``False`` uses
    the plain integral, which is what the orthonormal basis of
    L^2(R^N, theta_{k,a} dx) needs.
    """
    if m < 0:
        raise DomainError("m >= 0 required")
    return list(_harmonic_basis(params, int(m), bool(normalized)))


# ------------------------------------------------------------------ rank one

def intertwiner_coeff(n: int, k):
    """V_k x^n = b_n x^n with b_n = (1/2)_j / (k+1/2)_j, j = ceil(n/2)."""
    j = (n + 1) // 2
    half = Fraction(1, 2) if isinstance(k, (int, Fraction)) else 0.5
    num = 1
    den = 1
    for i in range(j):
        num = num * (half + i)
        den = den * (k + half + i)
    return num / den


def intertwiner_rank1(f: PolyND, k) -> PolyND:
    """V_k on one-variable polynomials, monomial by monomial."""
    if f.dim != 1:
        raise ScopeError("rank-one intertwiner needs a one-variable polynomial")
    if k == 0:
        return f
    return PolyND(1, {e: c * intertwiner_coeff(e[0], k) for e, c in f.terms.items()})


@lru_cache(maxsize=64)
def _vk_rule(k: float, n: int):
    rule = gauss_jacobi(n, k - 1, k)
    return rule.nodes, rule.weights / rule.weights.sum()


def vtilde_rank1(h, omega, eta, k, n: int = 48):
    """c_k * integral of h(t omega eta)(1+t)(1-t^2)^(k-1) dt on S^0 x S^0."""
    if k == 0:
        return h(np.asarray(omega * eta, dtype=float))
    t, w = _vk_rule(float(k), int(n))
    oe = np.asarray(omega) * np.asarray(eta)
    return np.tensordot(h(np.multiply.outer(oe, t)), w, axes=([-1], [0]))


def funk_hecke_check(h, p: PolyND, params: DeformParams, omega=None, n: int = 24):
    """|d_k int (V~ h)(w, e) p(e) theta_k d sigma(e) - C_{nu,m}(h) p(w)|."""
    m = p.degree
    nu = float(params.index) + (params.dim - 2) / 2
    if not nu > -0.5:
        raise ScopeError("2<k> + N > 1 required for the Gegenbauer transform")
    if params.dim == 1:
        k = float(params.k[0])
        omega = np.array([1.0]) if omega is None else np.atleast_1d(omega)
        lhs = 0.5 * sum(vtilde_rank1(h, omega[0], e, k) * p(np.array([e])) for e in (1.0, -1.0))
    elif params.k_zero:
        omega = np.eye(params.dim)[0] if omega is None else np.asarray(omega, dtype=float)
        x, w = sphere_rule(params, n)
        lhs = d_k(params) * np.sum(w * h(x @ omega) * p(x))
    else:
        raise ScopeError("Funk-Hecke check needs N = 1 or k = 0")
    rhs = gegenbauer_transform(m, nu, h) * p(omega)
    return float(abs(lhs - rhs))


def commutator_checks(params: DeformParams, test_polys) -> dict:
    """Max coefficient residual of each operator identity over ``test_polys``."""
    dim = params.dim
    res = {}

    def record(name, poly):
        res[name] = max(res.get(name, 0.0), float(poly.max_abs()))

    for p in test_polys:
        lap = dunkl_laplacian(p, params)
        for j in range(dim):
            # [Delta_k, M_j] = 2 T_j
            lhs = dunkl_laplacian(p.times_coord(j), params) - lap.times_coord(j)
            record("[Lap_k,M_j]=2T_j", lhs - 2 * dunkl_apply(p, j, params))
            for i in range(dim):
                tm = dunkl_apply(p.times_coord(j), i, params) - dunkl_apply(p, i, params).times_coord(j)
                expect = (p + 2 * params.k[i] * p.flip(i)) if i == j else PolyND(dim)
                record("[T_i,M_j]=delta_ij(1+2k_i s_i)", tm - expect)
                mt = dunkl_apply(p.times_coord(i), j, params) - dunkl_apply(p, j, params).times_coord(i)
                record("[T_i,M_j]=[T_j,M_i]", tm - mt)
                record("T_iT_j=T_jT_i",
                       dunkl_apply(dunkl_apply(p, j, params), i, params)
                       - dunkl_apply(dunkl_apply(p, i, params), j, params))
            record("s_j T_j s_j=-T_j",
                   dunkl_apply(p.flip(j), j, params).flip(j) + dunkl_apply(p, j, params))
        record("[E,Lap_k]=-2Lap_k", dunkl_laplacian(p.euler(), params) - lap.euler() - 2 * lap)
        sym = PolyND(dim)
        for j in range(dim):
            sym = sym + dunkl_apply(p, j, params).times_coord(j) + dunkl_apply(p.times_coord(j), j, params)
        record("sum(x_jT_j+T_jx_j)=N+2<k>+2E",
               sym - (params.dim + 2 * params.index) * p - 2 * p.euler())
    return res
