"""Scalar special functions: Gamma, normalized Bessel, Laguerre, Gegenbauer,
and the Bessel-Gegenbauer series I(b, nu; w; t)."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import special as sp

from .errors import ConvergenceError, DomainError, PoleError
from .quadrature import gauss_gegenbauer, gauss_jacobi, laguerre_unit_weights

SERIES_TOL = 1e-12
MAX_TERMS = 10_000


@dataclass(frozen=True)
class SeriesResult:
    value: complex
    terms_used: int
    truncation_error_estimate: float


@dataclass(frozen=True)
class PolynomialCoeffs:
    """Coefficients c_0..c_degree in the monomial basis."""
    coeffs: tuple

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t):
        # Horner; works for floats, complex, Fractions and arrays
        acc = 0 * t + self.coeffs[-1] if len(self.coeffs) else 0 * t
        for c in reversed(self.coeffs[:-1]):
            acc = acc * t + c
        return acc


def _is_pole(x) -> bool:
    x = complex(x)
    return x.imag == 0 and x.real <= 0 and x.real == math.floor(x.real)


def gamma(x):
    """Gamma function of a real or complex scalar."""
    if _is_pole(x):
        raise PoleError(f"Gamma has a pole at {x}")
    if isinstance(x, complex) and x.imag != 0:
        return complex(sp.gamma(x))
    return complex(sp.gamma(float(np.real(x))))


def rgamma(x):
    """1/Gamma, entire; vectorized."""
    return sp.rgamma(x)


# ---------------------------------------------------------------- Laguerre

def laguerre_all(lmax: int, lam: float, t):
    """L_0..L_lmax at t via the three-term recurrence; shape (lmax+1, *t.shape)."""
    if not lam > -1:
        raise DomainError(f"lambda > -1 violated (lambda={lam})")
    t = np.asarray(t)
    out = np.empty((lmax + 1,) + t.shape, dtype=np.result_type(t, float))
    out[0] = 1
    if lmax >= 1:
        out[1] = lam + 1 - t
    for n in range(1, lmax):
        out[n + 1] = ((2 * n + 1 + lam - t) * out[n] - (n + lam) * out[n - 1]) / (n + 1)
    return out


def laguerre(l: int, lam: float, t):
    """Generalized Laguerre polynomial L_l^(lam)(t)."""
    vals = laguerre_all(l, lam, t)[l]
    return vals if np.ndim(vals) else vals[()]


def laguerre_coeffs(l: int, lam) -> PolynomialCoeffs:
    """Coefficients of L_l^(lam) from the defining finite sum.

    Exact when ``lam`` is a Fraction or int: the j-th coefficient is
    (-1)^j (lam+j+1)_(l-j) / ((l-j)! j!).
    """
    coeffs = []
    for j in range(l + 1):
        poch = 1
        for i in range(l - j):
            poch = poch * (lam + j + 1 + i)
        coeffs.append((-1) ** j * poch / Fraction(math.factorial(l - j) * math.factorial(j))
                      if isinstance(lam, (int, Fraction))
                      else (-1) ** j * poch / (math.factorial(l - j) * math.factorial(j)))
    return PolynomialCoeffs(tuple(coeffs))


def laguerre_semigroup_coeffs(l: int, lam, c) -> PolynomialCoeffs:
    """exp(-cB) t^l with B = t d^2/dt^2 + (lam+1) d/dt, by the terminating series.

    B t^n = n (lam+n) t^(n-1), so sum_j (-c)^j/j! B^j t^l stops after l steps.
    Exact for Fraction inputs.
    """
    coeffs = [0] * (l + 1)
    cur = {l: 1}  # B^j t^l as {degree: coefficient}
    fact = 1
    for j in range(l + 1):
        if j:
            fact *= j
        (deg, val), = cur.items()
        coeffs[deg] = coeffs[deg] + (-c) ** j * val / fact
        if deg == 0:
            break
        cur = {deg - 1: val * deg * (lam + deg)}
    return PolynomialCoeffs(tuple(coeffs))


def laguerre_semigroup_monomial(l: int, lam, c, t):
    """Value of exp(-cB) t^l at t, which equals (-c)^l l! L_l^(lam)(t/c)."""
    if c == 0:
        raise DomainError("c != 0 required")
    return laguerre_semigroup_coeffs(l, lam, c)(t)


def hille_hardy_lhs(lam: float, u, v, w, n_terms: int = 80):
    """Partial sum of sum_k k!/Gamma(lam+k+1) L_k(u) L_k(v) w^k."""
    if not abs(w) < 1:
        raise DomainError("|w| < 1 required")
    lu = laguerre_all(n_terms - 1, lam, u)
    lv = laguerre_all(n_terms - 1, lam, v)
    k = np.arange(n_terms)
    coef = np.exp(sp.gammaln(k + 1) - sp.gammaln(lam + k + 1))
    return complex(np.sum(coef * lu * lv * np.power(complex(w), k)))


def hille_hardy_rhs(lam: float, u, v, w):
    """Closed form (1-w)^(-lam-1) exp(-(u+v)w/(1-w)) I~_lam(2 sqrt(uvw)/(1-w))."""
    w = complex(w)
    arg = 2 * np.sqrt(u * v * w + 0j) / (1 - w)
    return complex((1 - w) ** (-lam - 1) * np.exp(-(u + v) * w / (1 - w))
                   * bessel_i_tilde(lam, arg))


# ----------------------------------------------------------------- Bessel

def _itilde_series(lam, w):
    """Scaled series: returns exp(-|Re w|) * I~_lam(w)."""
    q = (w / 2) ** 2
    term = np.full(w.shape, rgamma(lam + 1), dtype=complex)
    total = term.copy()
    size = np.abs(term)
    aq = np.abs(q)
    for j in range(1, MAX_TERMS):
        term = term * q / (j * (lam + j))
        total += term
        size += np.abs(term)
        ratio = aq / ((j + 1) * abs(lam + j + 1))
        if j > 1 and np.all(ratio < 0.5):
            # tail relative to the absolute sum: the attainable accuracy
            tail = np.abs(term) * ratio / (1 - ratio)
            if np.all(tail <= 1e-17 * size):
                break
    else:
        raise ConvergenceError("Bessel series exceeded the term cap")
    return total * np.exp(-np.abs(w.real))


def _quad_order(wmax):
    n = int(0.75 * wmax) + 32
    return 16 * ((n + 15) // 16)


def _itilde_integral(lam, w):
    """Scaled integral form, lam > -1/2, grouped by quadrature order."""
    out = np.empty(w.shape, dtype=complex)
    orders = np.array([_quad_order(abs(x)) for x in w.ravel()]).reshape(w.shape)
    norm = 1.0 / (math.sqrt(math.pi) * math.gamma(lam + 0.5)) if lam + 0.5 < 170 else \
        math.exp(-0.5 * math.log(math.pi) - math.lgamma(lam + 0.5))
    for n in np.unique(orders):
        sel = orders == n
        rule = gauss_gegenbauer(int(n), lam)
        ws = w[sel]
        expo = np.outer(ws, rule.nodes) - np.abs(ws.real)[:, None]
        out[sel] = norm * (np.exp(expo) @ rule.weights)
    return out


def _itilde_contour(lam, w):
    """Scaled integral form along steepest-descent rays from t = -1 and t = 1.

    Used for oscillatory arguments (|Im w| >= |Re w|), where the value is
    small compared with the integrand and the real-segment rule cancels.
    """
    w = np.where(w.imag < 0, -w, w)  # I~ is even
    aw = np.abs(w)
    d = -np.conj(w) / aw  # w * d = -|w|, Im d > 0
    p = lam - 0.5
    nodes, wts = laguerre_unit_weights(48, p)  # the mass Gamma(p+1) cancels
    u = nodes[None, :]
    sig = u / aw[:, None]
    lower = np.exp(p * np.log1p(-sig * d[:, None] / 2)) @ wts
    upper = np.exp(p * np.log1p(sig * d[:, None] / 2)) @ wts
    shift = np.abs(w.real)
    log_scale = p * math.log(2) - (p + 1) * np.log(aw)
    val = (np.exp(-w - shift + log_scale) * d ** (p + 1) * lower
           - np.exp(w - shift + log_scale) * (-d) ** p * d * upper)
    return val / math.sqrt(math.pi)


def _itilde_saddle(lam, w):
    """Scaled integral form along -1 -> t_s -> 1 through the saddle point
    t_s of e^(wt) (1-t^2)^(lam-1/2); for orders comparable to |w|."""
    p = lam - 0.5
    n = 48 + 16 * int(math.sqrt(p) / 2)
    rule = gauss_jacobi(n, 0.0, p)  # weight (1+x)^p on [-1, 1]
    s = (1 + rule.nodes) / 2        # s in [0, 1], weight s^p
    wts = rule.weights / rule.weights.sum()  # integral of s^p ds is 1/(p+1)
    log_norm = -0.5 * math.log(math.pi) - math.lgamma(lam + 0.5) - math.log(p + 1)
    out = np.empty(w.shape, dtype=complex)
    for idx, wi in np.ndenumerate(w):
        ts = (-p + np.sqrt(p * p + wi * wi)) / wi
        shift = abs(wi.real)
        total = 0j
        for end in (-1.0, 1.0):
            # t = end + s dt: 1 - t^2 = s (-end dt) (1 + end t)
            dt = ts - end
            t = end + s * dt
            other = 1 + end * t
            log_f = (wi * t - shift + p * np.log(other)
                     + p * np.log(-end * dt + 0j) + log_norm)
            total += -end * dt * np.sum(wts * np.exp(log_f))
        out[idx] = total
    return out


def _itilde_large(lam, w):
    osc = np.abs(w.imag) >= np.abs(w.real)
    sad = osc & (np.abs(w) < lam)
    ray = osc & ~sad
    out = np.empty(w.shape, dtype=complex)
    if np.any(sad):
        out[sad] = _itilde_saddle(lam, w[sad])
    if np.any(ray):
        out[ray] = _itilde_contour(lam, w[ray])
    if np.any(~osc):
        out[~osc] = _itilde_integral(lam, w[~osc])
    return out


def _itilde_scaled(lam, w):
    w = np.asarray(w, dtype=complex)
    aw = np.abs(w)
    # the series is used wherever its cancellation stays bounded; at large
    # order the terms decay from the start
    use_series = ((aw <= 8) | ((aw <= 30) & (aw - np.abs(w.real) <= 10))
                  | ((aw ** 2 - w.real ** 2 <= 16 * (lam + 1)) & (aw <= 600)))
    out = np.empty(w.shape, dtype=complex)
    if np.any(use_series):
        out[use_series] = _itilde_series(lam, w[use_series])
    rest = ~use_series
    if np.any(rest):
        wr = w[rest]
        # the integral weight (1-t^2)^(lam-1/2) is too singular near lam = -1/2
        if lam > -0.25:
            out[rest] = _itilde_large(lam, wr)
        else:
            # downward step I~_lam = (lam+1) I~_(lam+1) + (w/2)^2 I~_(lam+2)
            out[rest] = ((lam + 1) * _itilde_large(lam + 1, wr)
                         + (wr / 2) ** 2 * _itilde_large(lam + 2, wr))
    return out


def bessel_i_tilde(lam: float, w, scaled: bool = False):
    """Normalized modified Bessel function sum_l (w/2)^(2l) / (l! Gamma(lam+l+1)).

    Entire in w.  With ``scaled=True`` returns exp(-|Re w|) times the value.
    Orders in (-1, -1/4] are reached by one downward recurrence step.
    """
    if not lam > -1:
        raise DomainError(f"lambda > -1 violated (lambda={lam})")
    arr = np.asarray(w)
    val = _itilde_scaled(float(lam), np.atleast_1d(arr).astype(complex))
    if not scaled:
        val = val * np.exp(np.abs(np.atleast_1d(arr).real))
    val = val.reshape(arr.shape)
    return val[()] if val.ndim == 0 else val


def bessel_j_tilde(nu: float, w, scaled: bool = False):
    """J~_nu(w) = I~_nu(i w)."""
    return bessel_i_tilde(nu, 1j * np.asarray(w), scaled=scaled)


def bessel_j_tilde_real(nu: float, v):
    """J~_nu(v) = (v/2)^(-nu) J_nu(v) for real v; the fast path behind the Fourier kernels.

    Uses scipy's J_nu for |v| > 2 and the power series below.
    """
    if not nu > -1:
        raise DomainError(f"nu > -1 violated (nu={nu})")
    v = np.abs(np.asarray(v, dtype=float))
    out = np.empty(v.shape)
    small = v <= 2
    if np.any(small):
        out[small] = _itilde_series(float(nu), 1j * v[small]).real
    big = ~small
    if np.any(big):
        vb = v[big]
        out[big] = sp.jv(nu, vb) * np.exp(-nu * np.log(vb / 2))
    return out[()] if out.ndim == 0 else out


# ------------------------------------------------------------- Gegenbauer

def gegenbauer_all(mmax: int, nu: float, t):
    """C_0^nu..C_mmax^nu at t by the three-term recurrence."""
    t = np.asarray(t, dtype=float)
    out = np.empty((mmax + 1,) + t.shape)
    out[0] = 1
    if mmax >= 1:
        out[1] = 2 * nu * t
    for n in range(1, mmax):
        out[n + 1] = (2 * t * (n + nu) * out[n] - (n + 2 * nu - 1) * out[n - 1]) / (n + 1)
    return out


def gegenbauer(m: int, nu: float, t):
    vals = gegenbauer_all(m, nu, t)[m]
    return vals if np.ndim(vals) else float(vals)


def gegenbauer_over_nu(m: int, t):
    """lim_{nu->0} C_m^nu(t)/nu = (2/m) T_m(t) for m >= 1."""
    if m < 1:
        raise DomainError("m >= 1 required (C_0^nu / nu diverges)")
    t = np.asarray(t, dtype=float)
    return 2.0 / m * np.cos(m * np.arccos(np.clip(t, -1, 1)))


def gegenbauer_normalized_all(mmax: int, nu: float, t):
    """((m+nu)/nu) C_m^nu(t) for m = 0..mmax, continuous at nu = 0."""
    t = np.asarray(t, dtype=float)
    if nu == 0:
        m = np.arange(1, mmax + 1).reshape((-1,) + (1,) * t.ndim)
        out = np.empty((mmax + 1,) + t.shape)
        out[0] = 1
        out[1:] = 2 * np.cos(m * np.arccos(np.clip(t, -1, 1)))
        return out
    m = np.arange(mmax + 1).reshape((-1,) + (1,) * t.ndim)
    return (m + nu) / nu * gegenbauer_all(mmax, nu, t)


def gegenbauer_explicit(m: int, nu: float, theta):
    """C_m^nu(cos theta) from the finite cosine sum (independent of the recurrence)."""
    theta = np.asarray(theta, dtype=float)
    total = np.zeros_like(theta)
    for j in range(m + 1):
        coef = sp.poch(nu, j) * sp.poch(nu, m - j) / (math.factorial(j) * math.factorial(m - j))
        total = total + coef * np.cos((m - 2 * j) * theta)
    return total


def gegenbauer_transform_weight(m: int, nu: float, t):
    """b_{nu,m} C_m^nu(t), regular at nu = 0."""
    if m == 0:
        b0 = math.exp(math.lgamma(nu + 1) - 0.5 * math.log(math.pi) - math.lgamma(nu + 0.5))
        return np.full(np.shape(t), b0)
    c_over_nu = gegenbauer_over_nu(m, t) if nu == 0 else gegenbauer(m, nu, t) / nu
    logb = ((2 * nu - 1) * math.log(2) + math.lgamma(m + 1) + 2 * math.lgamma(nu + 1)
            - math.log(math.pi) - math.lgamma(m + 2 * nu))
    return math.exp(logb) * np.asarray(c_over_nu)


def gegenbauer_transform(m: int, nu: float, h, n_nodes: int = 48,
                         exactness: int | None = None):
    """b_{nu,m} * integral of h(t) C_m^nu(t) (1-t^2)^(nu-1/2) over [-1, 1].

    ``exactness`` is the polynomial degree of h the caller needs integrated
    exactly; too few nodes for it is an error.
    """
    if not nu > -0.5:
        raise DomainError(f"nu > -1/2 violated (nu={nu})")
    if exactness is not None and 2 * n_nodes - 1 < exactness + m:
        raise DomainError(
            f"{n_nodes} nodes integrate degree {2 * n_nodes - 1} < {exactness + m}")
    rule = gauss_gegenbauer(n_nodes, nu)
    vals = np.asarray(h(rule.nodes))
    return rule.integrate(vals * gegenbauer_transform_weight(m, nu, rule.nodes))


# ------------------------------------------------------------ I(b,nu;w;t)

def i_fun(b: float, nu: float, w, t, tol: float = SERIES_TOL) -> SeriesResult:
    """Gamma(b nu+1) sum_m ((m+nu)/nu) (w/2)^(b m) I~_(b(m+nu))(w) C_m^nu(t)."""
    if not b > 0:
        raise DomainError("b > 0 required")
    if not 1 + b * nu > 0:
        raise DomainError(f"1 + b nu > 0 violated (b={b}, nu={nu})")
    if not -1 <= t <= 1:
        raise DomainError("t in [-1, 1] required")
    w = complex(w)
    if w == 0:
        return SeriesResult(1.0 + 0j, 1, 0.0)
    pref = gamma(b * nu + 1).real
    log_half = np.log(w / 2)
    total = 0j
    block = 16
    m0 = 0
    while m0 < MAX_TERMS:
        ms = np.arange(m0, m0 + block)
        g = gegenbauer_normalized_all(m0 + block - 1, nu, t)[m0:]
        terms = np.array([np.exp(b * m * log_half) * bessel_i_tilde(b * (m + nu), w)
                          for m in ms]) * g * pref
        total += terms.sum()
        tail = np.abs(terms[-4:]).max()
        scale = max(1.0, abs(total))
        # bound the tail by the largest Gegenbauer value times the envelope
        env = np.abs(np.exp(b * ms[-4:] * log_half)
                     * np.array([bessel_i_tilde(b * (m + nu), w) for m in ms[-4:]])).max()
        gmax = max(1.0, abs(gegenbauer_normalized_all(m0 + block, nu, 1.0)[-1]))
        est = max(tail, pref * env * gmax) * 2
        if m0 >= block and est <= tol * scale:
            return SeriesResult(total, int(m0 + block), float(est))
        m0 += block
    raise ConvergenceError("I(b,nu;w;t) series exceeded the term cap")


# ------------------------------------------------------ Gegenbauer expansions

def expansion_exp_wt(nu: float, w, t, m_max: int = 40):
    """Partial sum Gamma(nu) sum_{m<=m_max} (nu+m) (w/2)^m I~_(nu+m)(w) C_m^nu(t) of e^(wt)."""
    if not nu > 0:
        raise DomainError(f"nu > 0 required (nu={nu})")
    w = complex(w)
    c = gegenbauer_all(m_max, nu, t)
    total = 0j
    for m in range(m_max + 1):
        total += (nu + m) * (w / 2) ** m * bessel_i_tilde(nu + m, w) * c[m]
    return complex(math.gamma(nu) * total)


def expansion_bessel(nu: float, w, t, m_max: int = 40):
    """Partial sum of the expansion of I~_(nu-1/2)(w sqrt((1+t)/2)) in C_m^nu(t):
    2^(2nu) Gamma(nu)/sqrt(pi) sum_m (nu+m) (w/2)^(2m) I~_(2m+2nu)(w) C_m^nu(t)."""
    if not nu > 0:
        raise DomainError(f"nu > 0 required (nu={nu})")
    w = complex(w)
    c = gegenbauer_all(m_max, nu, t)
    total = 0j
    for m in range(m_max + 1):
        total += (nu + m) * (w / 2) ** (2 * m) * bessel_i_tilde(2 * m + 2 * nu, w) * c[m]
    return complex(2 ** (2 * nu) * math.gamma(nu) / math.sqrt(math.pi) * total)
