"""Gauss rules for the three measures used throughout the package.

All rules come from closed-form three-term recurrence coefficients followed by
a symmetric tridiagonal eigensolve (Golub-Welsch).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln

from .errors import DomainError


@dataclass(frozen=True, eq=False)
class QuadRule:
    nodes: np.ndarray
    weights: np.ndarray
    measure_tag: tuple

    def __post_init__(self):
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    def __len__(self):
        return len(self.nodes)

    def integrate(self, values) -> complex:
        """Sum ``weights * values`` along the node axis (the last one)."""
        return np.tensordot(np.asarray(values), self.weights, axes=([-1], [0]))


def _golub_welsch(diag, offdiag, mass):
    if len(diag) == 1:
        return np.asarray(diag, dtype=float), np.array([mass])
    nodes, vecs = eigh_tridiagonal(diag, offdiag)
    weights = mass * vecs[0] ** 2
    return nodes, weights


@lru_cache(maxsize=256)
def _laguerre_nodes(n, lam):
    """Nodes and probability-normalized weights (the mass Gamma(lam+1) may overflow)."""
    j = np.arange(n, dtype=float)
    diag = 2 * j + lam + 1
    k = np.arange(1, n, dtype=float)
    off = np.sqrt(k * (k + lam))
    return _golub_welsch(diag, off, 1.0)


def laguerre_unit_weights(n: int, lam: float):
    """Gauss-Laguerre nodes with weights summing to one."""
    if not lam > -1:
        raise DomainError(f"lambda > -1 violated (lambda={lam})")
    x, w = _laguerre_nodes(int(n), float(lam))
    return x.copy(), w.copy()


def gauss_laguerre(n: int, lam: float) -> QuadRule:
    """Rule for t^lam e^{-t} dt on (0, inf)."""
    if n < 1:
        raise DomainError("n >= 1 required")
    if not lam > -1:
        raise DomainError(f"lambda > -1 violated (lambda={lam})")
    x, w = _laguerre_nodes(int(n), float(lam))
    return QuadRule(x.copy(), w * np.exp(gammaln(lam + 1)), ("laguerre", float(lam)))


@lru_cache(maxsize=256)
def _jacobi_nodes(n, alpha, beta):
    s = alpha + beta
    j = np.arange(n, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        diag = (beta**2 - alpha**2) / ((2 * j + s) * (2 * j + s + 2))
    if abs(s) < 1e-15 or abs(s + 2) < 1e-15 or not np.isfinite(diag[0]):
        diag[0] = (beta - alpha) / (s + 2)
    k = np.arange(1, n, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        off2 = (4 * k * (k + alpha) * (k + beta) * (k + s)
                / ((2 * k + s) ** 2 * (2 * k + s + 1) * (2 * k + s - 1)))
    if n > 1:
        # k = 1 with the (1 + s) factor cancelled; regular when s = -1
        off2[0] = 4 * (1 + alpha) * (1 + beta) / ((2 + s) ** 2 * (3 + s))
    log_mass = ((s + 1) * np.log(2) + gammaln(alpha + 1) + gammaln(beta + 1)
                - gammaln(s + 2))
    return _golub_welsch(diag, np.sqrt(off2), np.exp(log_mass))


def gauss_jacobi(n: int, alpha: float, beta: float) -> QuadRule:
    """Rule for (1-t)^alpha (1+t)^beta dt on (-1, 1)."""
    if n < 1:
        raise DomainError("n >= 1 required")
    if not (alpha > -1 and beta > -1):
        raise DomainError(f"alpha, beta > -1 violated ({alpha}, {beta})")
    x, w = _jacobi_nodes(int(n), float(alpha), float(beta))
    return QuadRule(x.copy(), w.copy(), ("jacobi", float(alpha), float(beta)))


@lru_cache(maxsize=256)
def _gegenbauer_nodes(n, nu):
    k = np.arange(1, n, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        off2 = k * (k + 2 * nu - 1) / (4 * (k + nu) * (k + nu - 1))
    if n > 1:
        off2[0] = 1 / (2 * (1 + nu))
    log_mass = 0.5 * np.log(np.pi) + gammaln(nu + 0.5) - gammaln(nu + 1)
    x, w = _golub_welsch(np.zeros(n), np.sqrt(off2), np.exp(log_mass))
    # enforce exact mirror symmetry of the even weight
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return x, w


def gauss_gegenbauer(n: int, nu: float) -> QuadRule:
    """Rule for (1-t^2)^(nu-1/2) dt on (-1, 1)."""
    if n < 1:
        raise DomainError("n >= 1 required")
    if not nu > -0.5:
        raise DomainError(f"nu > -1/2 violated (nu={nu})")
    x, w = _gegenbauer_nodes(int(n), float(nu))
    return QuadRule(x.copy(), w.copy(), ("jacobi_gegenbauer", float(nu)))


def radial_rule(n: int, params, m: int = 0, rate: float | None = None) -> QuadRule:
    """Rule for exp(-rate r^a) r^(2m + 2<k> + N + a - 3) dr on (0, inf).

    ``rate`` defaults to 2/a, the decay of |f_{l,m}|^2.  The substitution
    t = rate * r^a maps the measure onto a generalized Laguerre weight, so the
    rule is exact for polynomials in r^a of degree <= 2n - 1.
    """
    a = float(params.a)
    expo = 2 * m + 2 * params.index + params.dim + a - 3
    if not expo > -1:
        raise DomainError(
            f"2m + 2<k> + N + a - 2 > 0 violated (m={m}, value={expo + 1:g})")
    if rate is None:
        rate = 2.0 / a
    lam = (expo + 1) / a - 1
    rule = gauss_laguerre(n, lam)
    r = (rule.nodes / rate) ** (1.0 / a)
    w = rule.weights / (a * rate ** (lam + 1))
    return QuadRule(r, w, ("radial", params.k, a, params.dim, m, float(rate)))
