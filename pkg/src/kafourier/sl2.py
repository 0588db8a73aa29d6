"""The sl_2 triple, the Laguerre eigenbasis and spectral calculus.

Functions of the form p(x) psi(|x|^a) with p k-harmonic of degree m live in
one sector; the triple acts on psi alone.  A square-integrable function is a
sum over sectors (m, j) of h_j(omega) psi_{m,j}(r) with {h_j} orthonormal on
the sphere, and each psi_{m,j} expands in the radial basis f_{l,m}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Number
from typing import Callable

import numpy as np
from numpy.polynomial import Polynomial
from scipy.special import gammaln

from .dunkl import DeformParams, PolyND, dunkl_laplacian, harmonic_basis, harmonic_dimension, sphere_rule
from .errors import ConvergenceError, DomainError, ScopeError
from .quadrature import radial_rule
from .specfun import laguerre_all, laguerre_coeffs, laguerre_semigroup_coeffs


@dataclass(frozen=True)
class RadialSector:
    """Degree m of the harmonic factor; fixes lambda = (2m + 2<k> + N - 2)/a."""
    m: int
    params: DeformParams

    def __post_init__(self):
        if self.m < 0:
            raise DomainError("m >= 0 required")
        if self.params.dim == 1 and self.m > 1:
            raise DomainError("N = 1 has only the sectors m = 0, 1")
        if not self.lam > -1:
            raise DomainError(
                f"2m + 2<k> + N + a - 2 > 0 violated (m={self.m})")

    @property
    def lam(self) -> float:
        return self.params.lam(self.m)

    @property
    def lam_exact(self):
        """lambda as a Fraction when a and k are exact, else a float."""
        p = self.params
        num = 2 * self.m + 2 * p.index + p.dim - 2
        if isinstance(p.a, (int, Fraction)) and all(isinstance(v, (int, Fraction)) for v in p.k):
            return Fraction(num) / Fraction(p.a)
        return float(num) / float(p.a)


def sector_harmonics(params: DeformParams, m: int) -> list:
    """Orthonormal harmonics of degree m under the plain sphere integral."""
    return harmonic_basis(m, params, normalized=False)


def sector_range(params: DeformParams, m_max: int) -> range:
    return range(min(m_max, 1) + 1) if params.dim == 1 else range(m_max + 1)


# ----------------------------------------------------------- radial basis

def _log_norm(l, lam, a):
    return 0.5 * ((lam + 1) * math.log(2) + gammaln(l + 1) - lam * math.log(a)
                  - gammaln(lam + l + 1))


def phi_basis_all(l_max: int, sector: RadialSector, r):
    """f_{0,m}..f_{l_max,m} at r; shape (l_max+1, *r.shape)."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("r >= 0 required")
    a = float(sector.params.a)
    lam = sector.lam
    ra = r ** a
    lag = laguerre_all(l_max, lam, 2 * ra / a)
    ls = np.arange(l_max + 1)
    norms = np.exp(_log_norm(ls, lam, a)).reshape((-1,) + (1,) * r.ndim)
    return norms * lag * (r ** sector.m * np.exp(-ra / a))


def phi_basis(l: int, sector: RadialSector, r):
    """Orthonormal radial function f_{l,m}(r) for the measure r^(2<k>+N+a-3) dr."""
    vals = phi_basis_all(l, sector, r)[l]
    return vals if np.ndim(vals) else float(vals)


def phi_unnormalized(l: int, p: PolyND, sector: RadialSector, x):
    """Phi_l(p, x) = p(x) L_l^(lam)((2/a)|x|^a) exp(-|x|^a/a)."""
    x = np.asarray(x, dtype=float)
    if sector.params.dim == 1 and (x.ndim == 0 or x.shape[-1] != 1):
        x = x[..., None]
    a = float(sector.params.a)
    ra = np.linalg.norm(x, axis=-1) ** a
    from .specfun import laguerre
    return p(x) * laguerre(l, sector.lam, 2 * ra / a) * np.exp(-ra / a)


def phi_norm2(l: int, sector: RadialSector) -> float:
    """Squared norm of Phi_l(p, .) divided by the plain sphere norm of p."""
    lam, a = sector.lam, float(sector.params.a)
    return math.exp(lam * math.log(a) + gammaln(lam + l + 1)
                    - (1 + lam) * math.log(2) - gammaln(l + 1))


# ------------------------------------------------------- sector functions

@dataclass(frozen=True)
class SectorFunction:
    """p(x) P(rho) exp(-c rho) with rho = |x|^a and p harmonic of degree m."""
    p: PolyND
    sector: RadialSector
    poly: Polynomial
    decay: float | None = None

    def __post_init__(self):
        if self.decay is None:
            object.__setattr__(self, "decay", 1.0 / float(self.sector.params.a))

    @classmethod
    def phi(cls, l: int, p: PolyND, sector: RadialSector):
        """Phi_l(p, .) in sector form."""
        a = float(sector.params.a)
        c = laguerre_coeffs(l, sector.lam).coeffs
        return cls(p, sector, Polynomial([float(cj) * (2 / a) ** j for j, cj in enumerate(c)]))

    def radial(self, rho):
        rho = np.asarray(rho, dtype=float)
        return self.poly(rho) * np.exp(-self.decay * rho)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.sector.params.dim == 1 and (x.ndim == 0 or x.shape[-1] != 1):
            x = x[..., None]
        rho = np.linalg.norm(x, axis=-1) ** float(self.sector.params.a)
        return self.p(x) * self.radial(rho)

    def _with(self, poly):
        return SectorFunction(self.p, self.sector, poly, self.decay)

    def _d(self, poly):
        # d/drho (P e^{-c rho}) = (P' - c P) e^{-c rho}
        return poly.deriv() - self.decay * poly

    def laguerre_coefficients(self, l_max: int | None = None) -> np.ndarray:
        """Coefficients on Phi_0..Phi_L; requires decay 1/a."""
        a = float(self.sector.params.a)
        if not math.isclose(self.decay, 1 / a, rel_tol=1e-14):
            raise ScopeError("Laguerre coefficients need decay 1/a")
        deg = self.poly.degree()
        n = deg + 1 if l_max is None else l_max + 1
        # columns: monomial coefficients of L_l((2/a) rho)
        mat = np.zeros((n, n), dtype=complex)
        for l in range(n):
            c = laguerre_coeffs(l, self.sector.lam).coeffs
            for j, cj in enumerate(c):
                mat[j, l] = float(cj) * (2 / a) ** j
        rhs = np.zeros(n, dtype=complex)
        pc = self.poly.coef
        rhs[:len(pc)] = pc
        return np.linalg.solve(mat, rhs)

    def to_spectral(self, l_max: int | None = None) -> "SpectralFunction":
        params = self.sector.params
        m = self.sector.m
        coeffs = self.laguerre_coefficients(l_max)
        l_top = len(coeffs) - 1
        out = {}
        for j, h in enumerate(sector_harmonics(params, m)):
            ph = _sphere_pair(self.p, h, params)
            if abs(ph) == 0:
                continue
            for l, c in enumerate(coeffs):
                val = c * ph * math.sqrt(phi_norm2(l, self.sector))
                if val != 0:
                    out[(l, m, j)] = complex(val)
        return SpectralFunction(params, out, (l_top, m))


def _sphere_pair(p, q, params):
    """Plain sphere integral of p conj(q) theta_k."""
    n = max(4, max(p.degree, q.degree) // 2 + 2)
    x, w = sphere_rule(params, n)
    return complex(np.sum(w * p(x) * np.conj(q(x))))


def _check_sector_input(f, params):
    if not isinstance(f, SectorFunction):
        raise ScopeError("input must be p(x) psi(|x|^a) with p k-harmonic (a SectorFunction)")
    if f.p.degree != f.sector.m or not f.p.is_homogeneous():
        raise ScopeError("harmonic factor must be homogeneous of degree m")
    if params.dim > 1 and not dunkl_laplacian(f.p, params).is_zero(1e-9 * max(1.0, f.p.max_abs())):
        raise ScopeError("harmonic factor is not k-harmonic")


def sl2_operators_apply(which: str, f: SectorFunction, params: DeformParams | None = None):
    """Apply H, E+, E-, K, N+ or N- through their action on the radial factor."""
    params = params or f.sector.params
    _check_sector_input(f, params)
    a = float(params.a)
    lam = f.sector.lam
    rho = Polynomial([0, 1])
    P = f.poly.convert(kind=Polynomial)
    dP = f._d(P)
    d2P = f._d(dP)
    ops = {
        "H": 2 * rho * dP + (lam + 1) * P,
        "E+": (1j / a) * rho * P,
        "E-": 1j * a * (rho * d2P + (lam + 1) * dP),
    }
    if which in ops:
        return f._with(ops[which])
    h, ep, em = ops["H"], ops["E+"], ops["E-"]
    if which == "K":
        return f._with(-1j * (ep - em))
    if which == "N+":
        return f._with(0.5 * (1j * h - ep - em))
    if which == "N-":
        return f._with(0.5 * (-1j * h - ep - em))
    raise ValueError(f"unknown operator {which!r}")


# ------------------------------------------------------- ladder matrices

def ladder_matrices(sector: RadialSector, l_max: int) -> dict:
    """Matrices of K, N+, N-, H, E+, E- on f_{0,m}..f_{l_max,m}."""
    lam = sector.lam
    n = l_max + 1
    ls = np.arange(n, dtype=float)
    k = np.diag(2 * ls + lam + 1).astype(complex)
    up = 1j * np.sqrt((ls[:-1] + 1) * (lam + ls[:-1] + 1))
    np_ = np.diag(up, -1)
    nm = np.diag(up, 1)  # <f_{l-1}| N- |f_l> = i sqrt(l (lam + l))
    return {
        "K": k, "N+": np_, "N-": nm,
        "H": -1j * (np_ - nm),
        "E+": 0.5 * (1j * k - np_ - nm),
        "E-": 0.5 * (-1j * k - np_ - nm),
    }


def multiplication_matrix(sector: RadialSector, l_max: int) -> np.ndarray:
    """Matrix of multiplication by rho = |x|^a on f_{0,m}..f_{l_max,m}."""
    lam = sector.lam
    ls = np.arange(l_max + 1, dtype=float)
    off = -np.sqrt((ls[:-1] + 1) * (ls[:-1] + lam + 1))
    a = float(sector.params.a)
    return 0.5 * a * (np.diag(2 * ls + lam + 1) + np.diag(off, 1) + np.diag(off, -1))


def sl2_relation_check(params: DeformParams, sector: RadialSector, l_max: int = 16) -> dict:
    """Residuals of the sl_2 relations on the truncated basis, edge rows excluded."""
    mats = ladder_matrices(sector, l_max + 2)
    H, Ep, Em = mats["H"], mats["E+"], mats["E-"]
    K, Np, Nm = mats["K"], mats["N+"], mats["N-"]
    keep = slice(0, l_max + 1)

    def res(m):
        return float(np.abs(m[keep, keep]).max())

    def comm(x, y):
        return x @ y - y @ x

    return {
        "[H,E+]-2E+": res(comm(H, Ep) - 2 * Ep),
        "[H,E-]+2E-": res(comm(H, Em) + 2 * Em),
        "[E+,E-]-H": res(comm(Ep, Em) - H),
        "[K,N+]-2N+": res(comm(K, Np) - 2 * Np),
        "[K,N-]+2N-": res(comm(K, Nm) + 2 * Nm),
        "[N+,N-]-K": res(comm(Np, Nm) - K),
        "skew(H)": res(H + H.conj().T),
        "skew(E+)": res(Ep + Ep.conj().T),
        "skew(E-)": res(Em + Em.conj().T),
    }


# ----------------------------------------------------------------- spectrum

@dataclass(frozen=True)
class SpectrumEntry:
    value: Number
    l: int
    m: int
    multiplicity: int


def spectrum(params: DeformParams, count: int) -> list:
    """The first ``count`` eigenvalues of -(|x|^(2-a) Delta_k - |x|^a), one entry per (l, m)."""
    a, dim = params.a, params.dim
    base = 2 * params.index + dim - 2 + a
    ms = range(2) if dim == 1 else range(count)
    entries = [SpectrumEntry(2 * a * l + 2 * m + base, l, m, harmonic_dimension(dim, m))
               for l in range(count) for m in ms]
    entries.sort(key=lambda e: (float(e.value), e.m, e.l))
    return entries[:count]


# ------------------------------------------------------ spectral functions

@dataclass(frozen=True)
class SpectralFunction:
    """Coefficients on the orthonormal basis h_j(omega) f_{l,m}(r).

    ``phases`` holds exact extra phases in units of pi (Fractions); the
    effective coefficient is coeffs[key] * exp(i pi phases[key]).
    """
    params: DeformParams
    coeffs: dict
    truncation: tuple
    phases: dict = field(default_factory=dict)
    defect: float = 0.0

    def coefficient(self, key) -> complex:
        c = self.coeffs.get(key, 0.0)
        ph = self.phases.get(key, 0)
        if ph:
            c = c * _exp_i_pi(ph)
        return complex(c)

    def vector(self) -> dict:
        return {key: self.coefficient(key) for key in self.coeffs}

    def norm2(self) -> float:
        return float(sum(abs(c) ** 2 for c in self.coeffs.values()))

    def sector_vector(self, m: int, j: int) -> np.ndarray:
        l_max = self.truncation[0]
        return np.array([self.coefficient((l, m, j)) for l in range(l_max + 1)])

    def sectors(self):
        return sorted({(m, j) for (_, m, j) in self.coeffs})

    def radial(self, m: int, j: int, r):
        sector = RadialSector(m, self.params)
        basis = phi_basis_all(self.truncation[0], sector, r)
        return np.tensordot(self.sector_vector(m, j), basis, axes=1)

    def __call__(self, x):
        params = self.params
        x = np.asarray(x, dtype=float)
        if params.dim == 1 and (x.ndim == 0 or x.shape[-1] != 1):
            x = x[..., None]
        r = np.linalg.norm(x, axis=-1)
        out = np.zeros(r.shape, dtype=complex)
        with np.errstate(invalid="ignore", divide="ignore"):
            for m, j in self.sectors():
                h = sector_harmonics(params, m)[j]
                # h(omega) f(r) = h(x) r^(-m) f(r); f(r) r^(-m) is regular at 0
                sector = RadialSector(m, params)
                basis = phi_basis_all(self.truncation[0], sector, r)
                rad = np.tensordot(self.sector_vector(m, j), basis, axes=1)
                rm = np.where(r > 0, r ** m, 1.0)
                out = out + h(x) * rad / rm
        return out

    def _replace(self, coeffs=None, phases=None):
        return SpectralFunction(self.params, self.coeffs if coeffs is None else coeffs,
                                self.truncation, self.phases if phases is None else phases,
                                self.defect)


def _exp_i_pi(ph) -> complex:
    """exp(i pi ph) with exact values at multiples of 1/2."""
    if isinstance(ph, (int, Fraction)):
        ph = Fraction(ph) % 2
        table = {Fraction(0): 1, Fraction(1, 2): 1j, Fraction(1): -1, Fraction(3, 2): -1j}
        if ph in table:
            return complex(table[ph])
        ph = float(ph)
    return complex(np.exp(1j * math.pi * ph))


@dataclass(frozen=True)
class SampledRadialFunction:
    """psi_{m,j}(r) per sector: f(r omega) = sum h_j(omega) psi_{m,j}(r).

    ``decay`` is the rate c with psi ~ exp(-c r^a); it picks the quadrature.
    """
    params: DeformParams
    sectors: dict
    decay: float | None = None

    @classmethod
    def from_function(cls, f: Callable, params: DeformParams, m_max: int,
                      decay: float | None = None, n_sphere: int | None = None):
        """Project f(x) onto the sectors m <= m_max by sphere quadrature."""
        n_sphere = n_sphere or max(8, m_max + 4)
        pts, wts = sphere_rule(params, n_sphere)
        sectors = {}
        for m in sector_range(params, m_max):
            for j, h in enumerate(sector_harmonics(params, m)):
                hv = np.conj(h(pts))

                def psi(r, hv=hv):
                    r = np.asarray(r, dtype=float)
                    vals = f(r[..., None, None] * pts)
                    return np.sum(vals * hv * wts, axis=-1)
                sectors[(m, j)] = psi
        return cls(params, sectors, decay)


def expand(f: SampledRadialFunction, params: DeformParams | None = None,
           truncation: tuple = (40, 0), n_nodes: int | None = None,
           max_defect: float | None = 1e-6) -> SpectralFunction:
    """Project onto f_{l,m} h_j by radial quadrature; reports the Parseval defect."""
    params = params or f.params
    l_max, m_max = truncation
    a = float(params.a)
    decay = f.decay if f.decay is not None else 1.0 / a
    n = n_nodes or max(2 * l_max + 20, 60)
    coeffs = {}
    total = 0.0
    for (m, j), psi in f.sectors.items():
        if m > m_max:
            continue
        sector = RadialSector(m, params)
        rule = radial_rule(n, params, m=m, rate=decay + 1 / a)
        r = rule.nodes
        vals = psi(r) * np.exp(decay * r ** a) / r ** m
        basis = phi_basis_all(l_max, sector, r) * np.exp(r ** a / a) / r ** m
        c = basis @ (rule.weights * vals)
        for l in range(l_max + 1):
            coeffs[(l, m, j)] = complex(c[l])
        nrule = radial_rule(n, params, m=m, rate=2 * decay)
        rr = nrule.nodes
        total += float(np.sum(nrule.weights * np.abs(psi(rr) * np.exp(decay * rr ** a) / rr ** m) ** 2))
    got = sum(abs(c) ** 2 for c in coeffs.values())
    defect = 1 - got / total if total > 0 else 0.0
    if max_defect is not None and defect > max_defect:
        raise ConvergenceError(
            f"Parseval defect {defect:.3e} exceeds {max_defect:g}; raise the truncation")
    return SpectralFunction(params, coeffs, (l_max, m_max), {}, float(defect))


def basis_function(params: DeformParams, l: int, m: int, j: int = 0,
                   truncation: tuple | None = None) -> SpectralFunction:
    truncation = truncation or (max(l, 1), m)
    return SpectralFunction(params, {(l, m, j): 1.0 + 0j}, truncation)


# -------------------------------------------------------- spectral calculus

def _mode_energy(params, l, m):
    return 2 * l + params.lam(m) + 1


def semigroup_apply(f: SpectralFunction, z: complex) -> SpectralFunction:
    """Omega(gamma_z): multiply each coefficient by exp(-z (2l + lambda_m + 1))."""
    z = complex(z)
    if z.real < 0:
        raise DomainError("Re z >= 0 required")
    new = {key: c * np.exp(-z * _mode_energy(f.params, key[0], key[1]))
           for key, c in f.coeffs.items()}
    return f._replace(coeffs=new)


def semigroup_operator_norm(params: DeformParams, z: complex, truncation: tuple) -> float:
    """sup over retained modes of |exp(-z (2l + lambda_m + 1))|."""
    z = complex(z)
    if z.real < 0:
        raise DomainError("Re z >= 0 required")
    l_max, m_max = truncation
    return max(math.exp(-z.real * _mode_energy(params, l, m))
               for l in range(l_max + 1) for m in sector_range(params, m_max))


def fka_phase(params: DeformParams, l: int, m: int):
    """Eigenvalue exponent: F multiplies f_{l,m} h_j by exp(i pi * phase)."""
    a = params.a
    if isinstance(a, (int, Fraction)):
        return -(l + Fraction(m) / Fraction(a))
    return -(l + m / float(a))


def fka_apply_spectral(f: SpectralFunction, power: int = 1) -> SpectralFunction:
    """F_{k,a}^power acting diagonally; exact phase bookkeeping for rational a."""
    a = f.params.a
    if isinstance(a, (int, Fraction)):
        phases = dict(f.phases)
        for key in f.coeffs:
            phases[key] = (phases.get(key, 0) + power * fka_phase(f.params, key[0], key[1])) % 2
        return f._replace(phases=phases)
    new = {key: c * np.exp(1j * math.pi * power * fka_phase(f.params, key[0], key[1]))
           for key, c in f.coeffs.items()}
    return f._replace(coeffs=new)


def segal_bargmann_apply(p: PolyND, l: int, sector: RadialSector) -> SectorFunction:
    """B(p |x|^(a l)) = exp(-rho/a) exp(-(a/2) B_rho) rho^l, i.e. (-a/2)^l l! Phi_l(p, .)."""
    a = sector.params.a
    c = a / 2 if isinstance(a, (int, Fraction)) else float(a) / 2
    coeffs = laguerre_semigroup_coeffs(l, sector.lam_exact, c).coeffs
    return SectorFunction(p, sector, Polynomial([complex(v) for v in coeffs]))


# ---------------------------------------------------------------- Heisenberg

def moment_rho(f: SpectralFunction) -> float:
    """|| |x|^(a/2) f ||^2 from the tridiagonal multiplication matrix."""
    l_max = f.truncation[0]
    total = 0.0
    for m, j in f.sectors():
        mat = multiplication_matrix(RadialSector(m, f.params), l_max)
        v = f.sector_vector(m, j)
        total += float(np.real(np.conj(v) @ mat @ v))
    return total


def heisenberg_spectral(f: SpectralFunction) -> tuple:
    """(|| |x|^(a/2) f || * || |xi|^(a/2) F f ||, (mu/2) ||f||^2)."""
    g = fka_apply_spectral(f)
    lhs = math.sqrt(moment_rho(f) * moment_rho(g))
    return lhs, float(f.params.mu) / 2 * f.norm2()


def gaussian_spectral(params: DeformParams, c: float, l_max: int = 60) -> SpectralFunction:
    """exp(-c |x|^a) in closed form: sector m = 0, geometric Laguerre coefficients."""
    a = float(params.a)
    sector = RadialSector(0, params)
    lam = sector.lam
    h0 = sector_harmonics(params, 0)[0]
    h0v = float(h0(np.eye(params.dim)[0]))
    q = (c - 1 / a) / (c + 1 / a)
    # e^{-c rho} = sum_l (1-q)^(lam+1) q^l L_l((2/a) rho) e^{-rho/a}
    coeffs = {}
    for l in range(l_max + 1):
        val = (1 - q) ** (lam + 1) * q ** l * math.sqrt(phi_norm2(l, sector)) / h0v
        coeffs[(l, 0, 0)] = complex(val)
    return SpectralFunction(params, coeffs, (l_max, 0))
