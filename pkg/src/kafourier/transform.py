"""The deformed Fourier transform F_{k,a} as an integral operator.

F_{k,a} f(xi) = c_{k,a} * integral of B(xi, x) f(x) theta_{k,a}(x) dx, with the
kernel B known in closed form in four scopes:

* ``rank_one``   N = 1, any a with 2k > 1 - a (two-Bessel form);
* ``k_zero_a1``  k = 0, a = 1, N >= 2 (one Bessel function of sqrt(2(rs + <x,y>)));
* ``k_zero_a2``  k = 0, a = 2 (plane wave exp(-i<x,y>));
* ``z2n_a2``     a = 2, any k (product of rank-one a = 2 kernels).

Identity checks return plain residuals; pass/fail is left to the caller.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy.special import gammaln

from .dunkl import DeformParams, PolyND, sphere_rule
from .errors import ConvergenceError, DomainError, ScopeError
from .kernels import c_ka
from .quadrature import gauss_laguerre, laguerre_unit_weights, radial_rule
from .sl2 import (RadialSector, SampledRadialFunction, SpectralFunction, expand,
                  fka_apply_spectral, heisenberg_spectral, ladder_matrices,
                  sector_harmonics, sector_range)
from .specfun import bessel_j_tilde, bessel_j_tilde_real

SCOPES = ("rank_one", "k_zero_a1", "k_zero_a2", "z2n_a2")


def _is_exact(v) -> bool:
    return isinstance(v, (int, Fraction))


def _a_equals(params, value) -> bool:
    return float(params.a) == value


@dataclass(frozen=True)
class BKernelSpec:
    params: DeformParams
    scope: str

    def __post_init__(self):
        p = self.params
        if self.scope not in SCOPES:
            raise ScopeError(f"unknown kernel scope {self.scope!r}; expected one of {SCOPES}")
        if self.scope == "rank_one":
            if p.dim != 1:
                raise ScopeError("rank_one scope needs N = 1")
            if not 2 * float(p.k[0]) > 1 - float(p.a):
                raise DomainError("2k > 1 - a violated")
        elif self.scope == "k_zero_a1":
            if not (p.k_zero and _a_equals(p, 1.0)):
                raise ScopeError("k_zero_a1 scope needs k = 0 and a = 1")
            if p.dim < 2:
                raise DomainError("2<k> + N > max(1, 2 - a) violated (k = 0, a = 1 needs N >= 2)")
        elif self.scope == "k_zero_a2":
            if not (p.k_zero and _a_equals(p, 2.0)):
                raise ScopeError("k_zero_a2 scope needs k = 0 and a = 2")
        elif not _a_equals(p, 2.0):
            raise ScopeError("z2n_a2 scope needs a = 2")


def default_scope(params: DeformParams) -> BKernelSpec:
    """The closed-form scope covering ``params``, or ScopeError."""
    a = float(params.a)
    if params.dim == 1:
        return BKernelSpec(params, "rank_one")
    if a == 2.0:
        return BKernelSpec(params, "k_zero_a2" if params.k_zero else "z2n_a2")
    if a == 1.0 and params.k_zero:
        return BKernelSpec(params, "k_zero_a1")
    raise ScopeError("no closed-form kernel for N >= 2 unless a = 2, or a = 1 with k = 0")


# ------------------------------------------------------------------ kernel

def _points(x, dim):
    x = np.asarray(x, dtype=float)
    if dim == 1 and (x.ndim == 0 or x.shape[-1] != 1):
        x = x[..., None]
    if x.shape[-1] != dim:
        raise DomainError(f"points must have last axis of length N = {dim}")
    return x


def b_rank_one(x, y, k: float, a: float):
    """Gamma(l0+1) [J~_l0(v) + xy a^(-2/a) e^(-i pi/a) J~_l1(v)], v = (2/a)|xy|^(a/2).

    l0 = (2k-1)/a, l1 = (2k+1)/a; the factor i^(-2/a) uses the branch with 1^(2/a) = 1.
    """
    xy = np.asarray(x, dtype=float) * np.asarray(y, dtype=float)
    lam0 = (2 * k - 1) / a
    lam1 = (2 * k + 1) / a
    v = (2 / a) * np.abs(xy) ** (a / 2)
    odd = xy * a ** (-2 / a) * np.exp(-1j * math.pi / a)
    val = math.exp(gammaln(lam0 + 1)) * (bessel_j_tilde_real(lam0, v) + odd * bessel_j_tilde_real(lam1, v))
    return np.asarray(val, dtype=complex)


def b_kernel(x, y, spec: BKernelSpec):
    """B_{k,a}(x, y); x and y broadcast over leading axes, last axis is N."""
    p = spec.params
    x = _points(x, p.dim)
    y = _points(y, p.dim)
    if spec.scope == "rank_one":
        val = b_rank_one(x[..., 0], y[..., 0], float(p.k[0]), float(p.a))
    elif spec.scope == "k_zero_a2":
        val = np.exp(-1j * np.sum(x * y, axis=-1))
    elif spec.scope == "z2n_a2":
        val = np.ones(np.broadcast_shapes(x.shape, y.shape)[:-1], dtype=complex)
        for i, ki in enumerate(p.k):
            val = val * b_rank_one(x[..., i], y[..., i], float(ki), 2.0)
    else:
        nx = np.linalg.norm(x, axis=-1)
        ny = np.linalg.norm(y, axis=-1)
        u = np.maximum(2 * (nx * ny + np.sum(x * y, axis=-1)), 0.0)
        nu = (p.dim - 3) / 2
        if p.dim == 2:
            # Gamma(1/2) J~_{-1/2}(v) = cos v
            val = np.cos(np.sqrt(u))
        else:
            val = math.exp(gammaln(nu + 1)) * bessel_j_tilde_real(nu, np.sqrt(u))
        val = np.asarray(val, dtype=complex)
    return val[()] if np.ndim(val) == 0 else val


# ------------------------------------------------------ kernel quadrature

def default_sphere_order(dim: int) -> int:
    """Sphere rule order; the tensor grid has 2 (2n)^(N-1) points."""
    return {1: 1, 2: 24, 3: 8}.get(dim, 5)


def _hermite_axis(n: int, k: float, rate: float):
    """Symmetric rule for h(x) |x|^(2k) exp(-rate x^2) dx on R, weights times exp(+rate x^2).

    Nodes +-sqrt(t_j / rate) from Gauss-Laguerre with parameter k - 1/2; exact
    on polynomials of degree <= 4n - 1 times the weight.
    """
    rule = gauss_laguerre(n, k - 0.5)
    x = np.sqrt(rule.nodes / rate)
    w = rule.weights * rate ** (-k - 0.5) / 2 * np.exp(rule.nodes)
    return np.concatenate([x, -x]), np.concatenate([w, w])


@dataclass(frozen=True, eq=False)
class QuadGrid:
    """Quadrature grid for integrals against theta_{k,a}(x) dx.

    ``kind`` is "parity" (N = 1: separate radial rules for the even and odd
    parts, points ordered r0, -r0, r1, -r1), "tensor" (a = 2: a product of
    one-dimensional rules, one per coordinate) or "polar" (radial times sphere).
    Weights absorb exp(+rate |x|^a), so integrands are the functions themselves.
    """
    kind: str
    points: np.ndarray
    weights: np.ndarray
    axes: tuple = ()
    n_even: int = 0

    def _split(self, vals):
        n0 = self.n_even
        n1 = (vals.shape[-1] - 2 * n0) // 2
        even = (vals[..., :n0] + vals[..., n0:2 * n0]) / 2
        odd = (vals[..., 2 * n0:2 * n0 + n1] - vals[..., 2 * n0 + n1:]) / 2
        return even, odd

    def integrate_abs2(self, vals) -> float:
        """Integral of |g|^2 theta_{k,a} from g on the grid points."""
        vals = np.asarray(vals)
        if self.kind != "parity":
            return float(np.sum(self.weights * np.abs(vals) ** 2))
        even, odd = self._split(vals)
        w0, w1 = self._split_weights()
        return float(2 * (np.sum(w0 * np.abs(even) ** 2) + np.sum(w1 * np.abs(odd) ** 2)))

    def _split_weights(self):
        n0 = self.n_even
        n1 = (len(self.weights) - 2 * n0) // 2
        return self.weights[:n0], self.weights[2 * n0:2 * n0 + n1]


def quad_grid(params: DeformParams, n: int, rate: float, n_sphere: int | None = None) -> QuadGrid:
    """Grid for functions decaying like exp(-rate |x|^a)."""
    a = float(params.a)
    if params.dim == 1:
        r0 = radial_rule(n, params, m=0, rate=rate)
        r1 = radial_rule(n, params, m=1, rate=rate)
        w0 = r0.weights * np.exp(rate * r0.nodes ** a)
        # the odd part is r * (smooth); its square carries the r^2 of the m = 1 weight
        w1 = r1.weights * np.exp(rate * r1.nodes ** a) / r1.nodes ** 2
        pts = np.concatenate([r0.nodes, -r0.nodes, r1.nodes, -r1.nodes])[:, None]
        wts = np.concatenate([w0, w0, w1, w1])
        return QuadGrid("parity", pts, wts, (), len(r0.nodes))
    if a == 2.0:
        axes = [_hermite_axis(max(n // 2, 4), float(ki), rate) for ki in params.k]
        mesh = np.meshgrid(*[ax[0] for ax in axes], indexing="ij")
        pts = np.stack([g.ravel() for g in mesh], axis=-1)
        wmesh = np.meshgrid(*[ax[1] for ax in axes], indexing="ij")
        wts = np.prod(np.stack([g.ravel() for g in wmesh]), axis=0)
        return QuadGrid("tensor", pts, wts, tuple(axes))
    rule = radial_rule(n, params, m=0, rate=rate)
    omega, w_om = sphere_rule(params, n_sphere or default_sphere_order(params.dim))
    r = rule.nodes
    pts = (r[:, None, None] * omega[None, :, :]).reshape(-1, params.dim)
    wts = ((rule.weights * np.exp(rate * r ** a))[:, None] * w_om[None, :]).reshape(-1)
    return QuadGrid("polar", pts, wts)


def as_callable(f, params: DeformParams) -> Callable:
    """Point evaluator for a callable or a SampledRadialFunction."""
    if isinstance(f, SampledRadialFunction):
        def g(x):
            x = _points(x, params.dim)
            r = np.linalg.norm(x, axis=-1)
            out = np.zeros(r.shape, dtype=complex)
            with np.errstate(invalid="ignore", divide="ignore"):
                for (m, j), psi in f.sectors.items():
                    h = sector_harmonics(params, m)[j]
                    rm = np.where(r > 0, r ** m, 1.0)
                    out = out + h(x) * psi(r) / rm
            return out
        return g
    return f


@dataclass(frozen=True)
class GridSamples:
    """Transform values on ``points``; ``grid`` is set when the points form a
    quadrature grid, so norms of the result can be computed."""
    points: np.ndarray
    values: np.ndarray
    grid: QuadGrid | None = None

    def norm2(self) -> float:
        """c_{k,a} * integral |values|^2 theta_{k,a}; needs a quadrature grid."""
        if self.grid is None:
            raise ScopeError("norm2 needs samples on a quadrature grid")
        return self.grid.integrate_abs2(self.values)


def _apply_parity(fv, grid: QuadGrid, xi, spec):
    w0, w1 = grid._split_weights()
    fe, fo = grid._split(fv)
    kern = b_kernel(xi[:, None, :], grid.points[None, :, :], spec)
    be, bo = grid._split(kern)
    return 2 * (be @ (w0 * fe) + bo @ (w1 * fo))


def _apply_tensor(fv, grid: QuadGrid, xi, spec):
    p = spec.params
    shape = tuple(len(ax[0]) for ax in grid.axes)
    acc = (fv * grid.weights).reshape(shape)
    mats = [b_rank_one(xi[:, i, None], ax[0][None, :], float(p.k[i]), 2.0)
            for i, ax in enumerate(grid.axes)]
    # contract one axis at a time, keeping the output index p in front
    out = np.tensordot(mats[0], acc, axes=([1], [0]))
    for mat in mats[1:]:
        out = np.einsum("pj,pj...->p...", mat, out)
    return out


def _apply_tensor_grid(fv, grid: QuadGrid, out: QuadGrid, spec):
    """Both grids are tensor grids: one matrix per axis, applied axis by axis."""
    p = spec.params
    acc = (fv * grid.weights).reshape(tuple(len(ax[0]) for ax in grid.axes))
    for i, (ax_in, ax_out) in enumerate(zip(grid.axes, out.axes)):
        mat = b_rank_one(ax_out[0][:, None], ax_in[0][None, :], float(p.k[i]), 2.0)
        acc = np.moveaxis(np.tensordot(mat, acc, axes=([1], [i])), 0, i)
    return acc.reshape(-1)


def _apply_polar(fv, grid: QuadGrid, xi, spec):
    fw = fv * grid.weights
    out = np.empty(len(xi), dtype=complex)
    block = max(1, 2_000_000 // max(len(fw), 1))
    for s in range(0, len(xi), block):
        out[s:s + block] = b_kernel(xi[s:s + block, None, :], grid.points[None, :, :], spec) @ fw
    return out


def fka_apply_kernel(f, spec: BKernelSpec, xi=None, decay: float | None = None,
                     n_radial: int = 64, n_sphere: int | None = None,
                     out_decay: float | None = None, n_out: int = 40) -> GridSamples:
    """F_{k,a} f by quadrature against B.

    ``decay`` is the rate c in |f(x)| ~ exp(-c |x|^a) (default 1/a) and sets the
    input grid.  Without ``xi`` the output points are a quadrature grid of rate
    ``2 * out_decay`` (default 1/(a^2 c), the decay of F of a generalized
    Gaussian), so ``norm2`` of the result is available.
    """
    params = spec.params
    a = float(params.a)
    decay = 1.0 / a if decay is None else float(decay)
    if decay <= 0:
        warnings.warn("input decay rate <= 0: the kernel integral may not converge",
                      RuntimeWarning, stacklevel=2)
        decay = 1e-3
    f = as_callable(f, params)
    grid = quad_grid(params, n_radial, decay, n_sphere)
    fv = np.asarray(f(grid.points), dtype=complex)
    out_grid = None
    if xi is None:
        out_decay = 1.0 / (a * a * decay) if out_decay is None else out_decay
        out_grid = quad_grid(params, n_out, 2 * out_decay, n_sphere)
        xi = out_grid.points
    xi = _points(xi, params.dim)
    flat = xi.reshape(-1, params.dim)
    if grid.kind == "tensor" and out_grid is not None:
        vals = c_ka(params) * _apply_tensor_grid(fv, grid, out_grid, spec)
    else:
        apply = {"parity": _apply_parity, "tensor": _apply_tensor, "polar": _apply_polar}[grid.kind]
        vals = c_ka(params) * apply(fv, grid, flat, spec)
    return GridSamples(xi, vals.reshape(xi.shape[:-1]), out_grid)


def norm2_quadrature(f, params: DeformParams, decay: float, n_radial: int = 64,
                     n_sphere: int | None = None) -> float:
    """c_{k,a} * integral |f|^2 theta_{k,a}, for |f| ~ exp(-decay |x|^a)."""
    grid = quad_grid(params, n_radial, 2 * decay, n_sphere)
    return c_ka(params) * grid.integrate_abs2(as_callable(f, params)(grid.points))


def plancherel_ratio(f, spec: BKernelSpec, decay: float, n_radial: int = 64,
                     n_sphere: int | None = None, n_out: int = 40) -> float:
    """||F f|| / ||f|| with F f from the kernel on an output quadrature grid."""
    params = spec.params
    g = fka_apply_kernel(f, spec, decay=decay, n_radial=n_radial, n_sphere=n_sphere, n_out=n_out)
    out = c_ka(params) * g.norm2()
    return math.sqrt(out / norm2_quadrature(f, params, decay, n_radial, n_sphere))


def plancherel_spectral_defect(f: SpectralFunction) -> float:
    """| ||F f||^2 - ||f||^2 | in the spectral pipeline (exactly zero)."""
    return abs(fka_apply_spectral(f).norm2() - f.norm2())


# --------------------------------------------------------------- Hankel

def hankel(psi: Callable, a: float, nu: float, s, n: int = 64, decay: float | None = None):
    """H_{a,nu}(psi)(s) = integral psi(r) J~_nu((2/a)(rs)^(a/2)) r^(a(nu+1)-1) dr.

    Gauss-Laguerre in t = decay * r^a; ``decay`` is the rate of psi ~ exp(-decay r^a).
    """
    a = float(a)
    if not nu > -1:
        raise DomainError(f"nu > -1 violated (nu={nu})")
    decay = 1.0 / a if decay is None else float(decay)
    t, w = laguerre_unit_weights(n, nu)
    r = (t / decay) ** (1 / a)
    s = np.asarray(s, dtype=float)
    arg = (2 / a) * np.multiply.outer(s, r) ** (a / 2)
    vals = np.asarray(psi(r), dtype=complex) * np.exp(t)
    integ = bessel_j_tilde_real(nu, arg) @ (w * vals)
    scale = math.exp(gammaln(nu + 1) - (nu + 1) * math.log(decay)) / a
    out = scale * integ
    return out[()] if np.ndim(out) == 0 else out


def bochner_check(p: PolyND, psi: Callable, spec: BKernelSpec, xi, decay: float | None = None,
                  n_radial: int = 64, n_sphere: int | None = None) -> float:
    """max |F(p psi(|.|)) - a^-lam e^(-i pi m/a) p(xi) H_{a,lam}(psi)(|xi|)| / max |rhs|."""
    params = spec.params
    a = float(params.a)
    m = p.degree
    lam = params.lam(m)
    xi = _points(xi, params.dim)

    def f(x):
        return p(x) * psi(np.linalg.norm(x, axis=-1))

    lhs = fka_apply_kernel(f, spec, xi, decay=decay, n_radial=n_radial, n_sphere=n_sphere).values
    h = hankel(psi, a, lam, np.linalg.norm(xi, axis=-1), n=n_radial, decay=decay)
    rhs = a ** (-lam) * np.exp(-1j * math.pi * m / a) * p(xi) * h
    return float(np.max(np.abs(lhs - rhs)) / max(np.max(np.abs(rhs)), 1e-300))


def hecke_check(p: PolyND, spec: BKernelSpec, xi, n_radial: int = 64, n_sphere: int | None = None) -> float:
    """sup |F(exp(-|x|^a/a) p) - e^(-i pi m/a) exp(-|xi|^a/a) p(xi)| over ``xi``."""
    params = spec.params
    a = float(params.a)
    m = p.degree
    xi = _points(xi, params.dim)

    def f(x):
        return p(x) * np.exp(-np.linalg.norm(x, axis=-1) ** a / a)

    lhs = fka_apply_kernel(f, spec, xi, n_radial=n_radial, n_sphere=n_sphere).values
    rhs = np.exp(-1j * math.pi * m / a) * np.exp(-np.linalg.norm(xi, axis=-1) ** a / a) * p(xi)
    return float(np.max(np.abs(lhs - rhs)))


# ------------------------------------------------------- master formula

# halvings from 0.2; the first four levels alone leave ~1e-4 extrapolation error
EPS_LADDER = tuple(0.2 * 2.0 ** -j for j in range(8))


def _neville_at_zero(xs, ys):
    """Value at 0 of the interpolating polynomial through (xs, ys)."""
    p = list(ys)
    n = len(xs)
    for j in range(1, n):
        for i in range(n - j):
            p[i] = (xs[i + j] * p[i] - xs[i] * p[i + 1]) / (xs[i + j] - xs[i])
    return p[0]


def master_integral_rank_one(x: float, y: float, k: float, a: float, eps: float = 0.0,
                             n: int = 96) -> complex:
    """c_{k,a} * integral over R of exp((i - eps)|u|^a/a) B(x,u) B(u,y) |u|^(2k+a-2) du.

    In t = |u|^a the +u and -u halves combine into two entire profiles times
    t^l0 and t^l1; rotating t onto the ray where exp((i - eps) t/a) decays
    gives Laplace integrals.
    """
    lam0 = (2 * k - 1) / a
    lam1 = (2 * k + 1) / a
    g0 = math.exp(gammaln(lam0 + 1))
    cx = (2 / a) * abs(x) ** (a / 2)
    cy = (2 / a) * abs(y) ** (a / 2)
    zeta = complex(1j - eps)
    # t = rot * tau with rot * zeta = -|zeta|
    rot = -abs(zeta) / zeta
    rate = abs(zeta) / a
    beta2 = (a ** (-2 / a) * np.exp(-1j * math.pi / a)) ** 2
    total = 0j
    for lam, weight in ((lam0, 1.0), (lam1, x * y * beta2)):
        if weight == 0:
            continue
        tau, w = laguerre_unit_weights(n, lam)
        t = rot * tau / rate
        root = np.sqrt(t)
        prof = bessel_j_tilde(lam, cx * root) * bessel_j_tilde(lam, cy * root)
        jac = np.exp(gammaln(lam + 1)) * (rot / rate) ** (lam + 1)
        total += weight * jac * np.sum(w * prof)
    params = DeformParams(1, a, k)
    return complex(c_ka(params) * 2 * g0 ** 2 / a * total)


def master_rhs_rank_one(x: float, y: float, k: float, a: float) -> complex:
    """e^(i pi mu/(2a)) exp(-i(|x|^a + |y|^a)/a) B(x,y) with mu = 2k + a - 1."""
    mu = 2 * k + a - 1
    return complex(np.exp(1j * math.pi * mu / (2 * a) - 1j * (abs(x) ** a + abs(y) ** a) / a)
                   * b_rank_one(x, y, k, a))


def _master_factors(x, y, spec: BKernelSpec):
    p = spec.params
    if spec.scope == "rank_one":
        return [(float(np.ravel(x)[0]), float(np.ravel(y)[0]), float(p.k[0]), float(p.a))]
    if spec.scope in ("k_zero_a2", "z2n_a2"):
        x = _points(x, p.dim)
        y = _points(y, p.dim)
        return [(float(x[i]), float(y[i]), float(p.k[i]), 2.0) for i in range(p.dim)]
    raise ScopeError("master formula check covers rank_one and a = 2 scopes")


@dataclass(frozen=True)
class MasterResult:
    lhs: complex
    rhs: complex
    residual: float
    method: str


def master_formula_check(x, y, spec: BKernelSpec, method: str = "richardson",
                         eps_ladder=EPS_LADDER, n: int = 96) -> MasterResult:
    """Regularized master-formula residual |lhs - rhs| / max(1, |rhs|).

    ``richardson`` extrapolates the e^(-eps |u|^a) regularized integrals to
    eps = 0; ``rotation`` evaluates the eps = 0 Abel limit directly on the
    rotated contour.  For a = 2 the integral factorizes over coordinates.
    """
    factors = _master_factors(x, y, spec)
    lhs = 1 + 0j
    rhs = 1 + 0j
    for xi, yi, ki, a in factors:
        if method == "richardson":
            vals = [master_integral_rank_one(xi, yi, ki, a, e, n) for e in eps_ladder]
            part = _neville_at_zero(list(eps_ladder), vals)
            spread = abs(vals[-1] - part)
            if not np.isfinite(spread):
                raise ConvergenceError("regularized master integral did not converge")
        elif method == "rotation":
            part = master_integral_rank_one(xi, yi, ki, a, 0.0, n)
        else:
            raise ValueError(f"unknown method {method!r}")
        lhs *= part
        rhs *= master_rhs_rank_one(xi, yi, ki, a)
    res = abs(lhs - rhs) / max(1.0, abs(rhs))
    return MasterResult(complex(lhs), complex(rhs), float(res), method)


# ------------------------------------------------------------ PDE system

def _d1(f, h):
    return (-f[4] + 8 * f[3] - 8 * f[1] + f[0]) / (12 * h)


def _d2(f, h):
    return (-f[4] + 16 * f[3] - 30 * f[2] + 16 * f[1] - f[0]) / (12 * h * h)


def _fd_parts(fun, x, k, h):
    """Euler derivative and Dunkl Laplacian of ``fun`` at x by 5-point stencils.

    Delta_k f = Delta f + sum_i k_i (2 f_i / x_i - (f - f(sigma_i x)) / x_i^2).
    """
    dim = len(x)
    f0 = fun(x)
    euler = 0j
    lap = 0j
    for i in range(dim):
        e = np.zeros(dim)
        e[i] = h
        vals = [fun(x + s * e) for s in (-2, -1, 0, 1, 2)]
        vals[2] = f0
        d1 = _d1(vals, h)
        euler += x[i] * d1
        lap += _d2(vals, h)
        if k[i]:
            flip = x.copy()
            flip[i] = -flip[i]
            lap += k[i] * (2 * d1 / x[i] - (f0 - fun(flip)) / x[i] ** 2)
    return f0, euler, lap


def pde_residuals(spec: BKernelSpec, n_points: int = 100, seed: int = 0, h: float = 5e-3,
                  r_range=(0.3, 3.0), min_coord: float = 0.2) -> dict:
    """Max relative residuals of E^x B = E^xi B and the two Laplacian equations.

    Points have norms in ``r_range`` and every coordinate at least
    ``min_coord`` away from the reflecting hyperplanes.  Residuals are scaled
    by the local kernel magnitude times max(1, |x|^a, |xi|^a).
    """
    params = spec.params
    dim = params.dim
    a = float(params.a)
    k = [float(v) for v in params.k]
    rng = np.random.default_rng(seed)

    def sample():
        while True:
            om = rng.normal(size=dim)
            om /= np.linalg.norm(om)
            v = rng.uniform(*r_range) * om
            if np.all(np.abs(v) >= min_coord):
                return v

    worst = {"euler": 0.0, "laplacian_xi": 0.0, "laplacian_x": 0.0}
    for _ in range(n_points):
        x = sample()
        xi = sample()
        bx = lambda u: complex(b_kernel(xi, u, spec))
        bxi = lambda u: complex(b_kernel(u, x, spec))
        b0, ex, lapx = _fd_parts(bx, x, k, h)
        _, exi, lapxi = _fd_parts(bxi, xi, k, h)
        nx = np.linalg.norm(x)
        nxi = np.linalg.norm(xi)
        scale = max(abs(b0), 1e-3) * max(1.0, nx ** a, nxi ** a)
        res = {
            "euler": abs(ex - exi) / scale,
            "laplacian_xi": abs(nxi ** (2 - a) * lapxi + nx ** a * b0) / scale,
            "laplacian_x": abs(nx ** (2 - a) * lapx + nxi ** a * b0) / scale,
        }
        for key, val in res.items():
            worst[key] = max(worst[key], float(val))
    return worst


# ---------------------------------------------------- spectral identities

def heisenberg_product(f, params: DeformParams | None = None, truncation=(60, 4)) -> tuple:
    """(|| |x|^(a/2) f || * || |xi|^(a/2) F f ||, (mu/2) ||f||^2)."""
    if isinstance(f, SampledRadialFunction):
        f = expand(f, params or f.params, truncation=truncation)
    if not isinstance(f, SpectralFunction):
        raise ScopeError("heisenberg_product takes a SpectralFunction or SampledRadialFunction")
    lhs, rhs = heisenberg_spectral(f)
    if lhs < rhs - 1e-9 * max(1.0, rhs):
        raise ConvergenceError("Heisenberg moments violate the inequality; truncation too small")
    return lhs, rhs


def finite_order(a) -> int | None:
    """Order of F_{k,a}: 2p for a = p/q in lowest terms; None when a is not rational."""
    if isinstance(a, (int, Fraction)):
        frac = Fraction(a)
    else:
        frac = Fraction(float(a)).limit_denominator(10 ** 6)
        if abs(float(frac) - float(a)) > 1e-12:
            return None
    return 2 * frac.numerator


def _random_spectral(params: DeformParams, l_max: int, m_max: int, seed: int) -> SpectralFunction:
    rng = np.random.default_rng(seed)
    coeffs = {}
    for m in sector_range(params, m_max):
        for j in range(len(sector_harmonics(params, m))):
            for l in range(l_max + 1):
                coeffs[(l, m, j)] = complex(rng.normal(), rng.normal())
    return SpectralFunction(params, coeffs, (l_max, m_max))


def _phase_map(f: SpectralFunction, power: int) -> dict:
    g = fka_apply_spectral(f, power)
    return {key: g.phases.get(key, 0) for key in f.coeffs}


def inversion_check(params: DeformParams, l_max: int = 8, m_max: int = 4, seed: int = 0) -> dict:
    """F^2 against identity (a = 1/r) or parity (a = 2/(2r+1)), exactly on phases.

    Returns the kind of identity found and the number of mismatching modes.
    """
    a = Fraction(params.a) if _is_exact(params.a) else None
    if a is None:
        raise ScopeError("exact inversion check needs an int or Fraction a")
    f = _random_spectral(params, l_max, m_max, seed)
    phases = _phase_map(f, 2)
    if a.numerator == 1:
        kind, target = "identity", lambda m: Fraction(0)
    elif a.numerator == 2 and a.denominator % 2 == 1:
        kind, target = "parity", lambda m: Fraction(m % 2)
    else:
        raise ScopeError("F^2 is identity or parity only for a = 1/r or a = 2/(2r+1)")
    bad = sum(1 for (l, m, j), ph in phases.items() if Fraction(ph) % 2 != target(m))
    return {"kind": kind, "mismatches": bad, "modes": len(phases)}


def finite_order_check(params: DeformParams, l_max: int = 4, m_max: int = 3) -> dict:
    """F^(2p) is the identity and no smaller positive power is."""
    order = finite_order(params.a)
    if order is None or not _is_exact(params.a):
        raise ScopeError("finite order check needs an int or Fraction a")
    f = _random_spectral(params, l_max, m_max, seed=1)
    full = _phase_map(f, order)
    is_id = all(Fraction(ph) % 2 == 0 for ph in full.values())
    first = next((j for j in range(1, order + 1)
                  if all(Fraction(ph) % 2 == 0 for ph in _phase_map(f, j).values())), None)
    return {"order": order, "identity_at_order": is_id, "first_identity_power": first}


def intertwining_check(sector: RadialSector, l_max: int = 16) -> dict:
    """Ladder form of F E = -(E + mu) F and F |x|^a = -|xi|^(2-a) Delta_k F.

    On f_{l,m}, F is the diagonal phase e^(-i pi (l + m/a)); E = (a H - mu)/2,
    |x|^a = -i a E+ and |x|^(2-a) Delta_k = -i a E-.
    """
    mats = ladder_matrices(sector, l_max)
    params = sector.params
    a = float(params.a)
    mu = float(params.mu)
    ls = np.arange(l_max + 1)
    d = np.diag(np.exp(-1j * math.pi * (ls + sector.m / a)))
    euler = (a * mats["H"] - mu * np.eye(l_max + 1)) / 2
    mult = -1j * a * mats["E+"]
    lap = -1j * a * mats["E-"]
    return {
        "euler": float(np.abs(d @ euler + (euler + mu * np.eye(l_max + 1)) @ d).max()),
        "multiplication": float(np.abs(d @ mult + lap @ d).max()),
    }
