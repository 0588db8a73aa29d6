"""Named verification suites: every identity as a (residual, tolerance) case.

Each suite takes optional ``DeformParams``; without them it runs a built-in
set of configurations, with them it runs the cases that apply to that
configuration.  Cases are independent and run on a thread pool; results keep
their declaration order so reports are deterministic.
"""
from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .dunkl import DeformParams, PolyND, harmonic_basis
from .errors import ConvergenceError, DomainError, ScopeError
from .kernels import (c_ka, c_ka_quadrature, eigenrelation_residual, semigroup_kernel_law,
                      weber_check)
from .quadrature import gauss_laguerre
from .sl2 import (RadialSector, SpectralFunction, basis_function, gaussian_spectral,
                  sector_harmonics, sector_range, sl2_relation_check)
from .specfun import (bessel_i_tilde, bessel_j_tilde, bessel_j_tilde_real, expansion_bessel,
                      expansion_exp_wt, hille_hardy_lhs, hille_hardy_rhs, i_fun, laguerre_all,
                      laguerre_coeffs, laguerre_semigroup_coeffs)
from .transform import (b_kernel, default_scope, finite_order_check, heisenberg_product,
                        hecke_check, intertwining_check, inversion_check, master_formula_check,
                        pde_residuals, plancherel_ratio, plancherel_spectral_defect,
                        bochner_check)

SUITES = ("specfun", "sl2", "kernels", "weber", "transform", "master", "heisenberg")


@dataclass(frozen=True)
class CaseResult:
    name: str
    paper_ref: str  # identity name; kept under this key for the report schema
    residual: float
    tolerance: float
    passed: bool
    note: str = ""

    def as_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        if not d["note"]:
            d.pop("note")
        return d


@dataclass(frozen=True)
class Case:
    name: str
    identity: str
    tolerance: float
    run: Callable[[], float]
    note: str = ""

    def evaluate(self) -> CaseResult:
        res = float(self.run())
        ok = bool(np.isfinite(res) and res <= self.tolerance)
        return CaseResult(self.name, self.identity, res, self.tolerance, ok, self.note)


def run_cases(cases: list, workers: int = 4) -> list:
    if workers <= 1:
        return [c.evaluate() for c in cases]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda c: c.evaluate(), cases))


def _tag(params: DeformParams) -> str:
    k = ",".join(f"{float(v):g}" for v in params.k)
    return f"N={params.dim},a={float(params.a):g},k=({k})"


# ------------------------------------------------------------------ specfun

def laguerre_gram_residual(lam: float, l_max: int = 12) -> float:
    rule = gauss_laguerre(l_max + 2, lam)
    vals = laguerre_all(l_max, lam, rule.nodes)
    gram = (vals * rule.weights) @ vals.T
    ls = np.arange(l_max + 1)
    expect = np.exp([math.lgamma(lam + l + 1) - math.lgamma(l + 1) for l in ls])
    return float(np.max(np.abs(gram - np.diag(expect)) / expect[:, None]))


def laguerre_semigroup_residual(l_max: int = 10, lam=Fraction(3, 2), c=Fraction(2, 3)) -> float:
    """Exact: exp(-cB) t^l minus (-c)^l l! L_l(t/c), coefficientwise in Fractions."""
    worst = 0
    for l in range(l_max + 1):
        lhs = laguerre_semigroup_coeffs(l, lam, c).coeffs
        lag = laguerre_coeffs(l, lam).coeffs
        rhs = [(-c) ** l * math.factorial(l) * cj / c ** j for j, cj in enumerate(lag)]
        worst = max([worst] + [abs(x - y) for x, y in zip(lhs, rhs)])
    return float(worst)


def hille_hardy_residual(lam: float) -> float:
    grid = (0.2, 1.0, 2.5)
    worst = 0.0
    for u in grid:
        for v in grid:
            for w in (-0.6, 0.3, 0.6):
                lhs = hille_hardy_lhs(lam, u, v, w, 80)
                rhs = hille_hardy_rhs(lam, u, v, w)
                worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return worst


def expansion_residual(nu: float) -> float:
    worst = 0.0
    for w in (0.4, -2.0, 5.0, 3j, 2 + 4j, -5j, 3 - 3j):
        for t in np.linspace(-1, 1, 9):
            a = expansion_exp_wt(nu, w, t)
            b = cmath.exp(w * t)
            c = expansion_bessel(nu, w, t)
            d = complex(bessel_i_tilde(nu - 0.5, w * math.sqrt((1 + t) / 2)))
            worst = max(worst, abs(a - b) / max(1.0, abs(b)), abs(c - d) / max(1.0, abs(d)))
    return worst


def i_fun_grid(n_points: int = 500, seed: int = 0):
    """Random (b, nu, w, t) with b in {1, 2}, |w| <= 5."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n_points):
        b = 1 + i % 2
        nu = float(rng.uniform(0.1, 2.5))
        w = complex(*rng.uniform(-1, 1, 2)) * float(rng.uniform(0, 5)) / math.sqrt(2)
        t = float(rng.uniform(-1, 1))
        out.append((b, nu, w, t))
    return out


def i_fun_closed(b: int, nu: float, w: complex, t: float) -> complex:
    if b == 1:
        return cmath.exp(w * t)
    return math.gamma(nu + 0.5) * complex(bessel_i_tilde(nu - 0.5, w * math.sqrt((1 + t) / 2)))


def i_fun_residual(points) -> float:
    worst = 0.0
    for b, nu, w, t in points:
        ser = i_fun(b, nu, w, t).value
        cl = i_fun_closed(b, nu, w, t)
        worst = max(worst, abs(ser - cl) / max(abs(cl), 1e-300))
    return worst


def bessel_paths_residual() -> float:
    v = np.linspace(0, 60, 301)
    worst = 0.0
    for nu in (-0.5, 0.2, 1.7, 6.5):
        worst = max(worst, float(np.max(np.abs(bessel_j_tilde_real(nu, v)
                                               - bessel_j_tilde(nu, v).real))))
    return worst


def suite_specfun(params=None) -> list:
    cases = [Case(f"laguerre_gram_lam={lam:g}", "Laguerre orthogonality", 1e-10,
                  lambda lam=lam: laguerre_gram_residual(lam)) for lam in (-0.4, 0.0, 2.5)]
    cases.append(Case("laguerre_semigroup_exact", "exp(-cB) t^l Laguerre representation", 0.0,
                      laguerre_semigroup_residual))
    cases += [Case(f"hille_hardy_lam={lam:g}", "Hille-Hardy formula", 1e-9,
                   lambda lam=lam: hille_hardy_residual(lam)) for lam in (0.3, 1.7)]
    cases += [Case(f"gegenbauer_expansions_nu={nu:g}", "Gegenbauer expansions of e^(wt) and I~",
                   1e-9, lambda nu=nu: expansion_residual(nu)) for nu in (0.5, 1.5)]
    cases.append(Case("i_fun_closed_forms", "I(b,nu;w;t) at b = 1, 2", 1e-10,
                      lambda: i_fun_residual(i_fun_grid(100))))
    cases.append(Case("bessel_real_vs_complex", "J~ real fast path vs complex series/integrals",
                      1e-11, bessel_paths_residual))
    return cases


# ---------------------------------------------------------------------- sl2

SL2_CONFIGS = [DeformParams(1, 1, 0.6), DeformParams(1, 2, 0.6), DeformParams(3, 1, 0),
               DeformParams(2, 0.7, (0.3, 1.1)), DeformParams(2, Fraction(2, 3), 0.5)]


def sl2_residual(params: DeformParams, l_max: int = 16) -> float:
    worst = 0.0
    for m in sector_range(params, 3):
        res = sl2_relation_check(params, RadialSector(m, params), l_max)
        worst = max(worst, max(res.values()))
    return worst


def intertwining_residual(params: DeformParams) -> float:
    return max(max(intertwining_check(RadialSector(m, params)).values())
               for m in sector_range(params, 3))


def harmonic_orthonormality(params: DeformParams) -> float:
    from .dunkl import sphere_inner
    worst = 0.0
    for m in sector_range(params, 3):
        basis = harmonic_basis(m, params)
        for i, p in enumerate(basis):
            for j, q in enumerate(basis):
                worst = max(worst, abs(sphere_inner(p, q, params) - (i == j)))
    return worst


def suite_sl2(params=None) -> list:
    configs = [params] if params else SL2_CONFIGS
    cases = []
    for p in configs:
        t = _tag(p)
        cases.append(Case(f"sl2_relations[{t}]", "sl2 commutation relations", 1e-10,
                          lambda p=p: sl2_residual(p)))
        cases.append(Case(f"intertwining[{t}]", "F E = -(E+mu) F and F |x|^a = -|xi|^(2-a) Delta_k F",
                          1e-9, lambda p=p: intertwining_residual(p)))
        cases.append(Case(f"harmonic_orthonormality[{t}]", "k-harmonic basis orthonormality",
                          1e-10, lambda p=p: harmonic_orthonormality(p)))
    return cases


# ------------------------------------------------------------------ kernels

KERNEL_CONFIGS = [DeformParams(1, 1, 0.6), DeformParams(1, 2, 0.6), DeformParams(3, 1, 0),
                  DeformParams(3, 2, 0)]


def eigenrelation_worst(params: DeformParams, l_max: int = 6, zs=(0.4, 0.4 + 1j)) -> float:
    r = np.linspace(0.2, 2.5, 7)
    worst = 0.0
    for m in sector_range(params, 1):
        sector = RadialSector(m, params)
        for z in zs:
            for l in range(l_max + 1):
                worst = max(worst, eigenrelation_residual(l, z, sector, r))
    return worst


def semigroup_law_worst(params: DeformParams, count: int = 20, seed: int = 0) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(count):
        sector = RadialSector(i % 2 if params.dim == 1 else i % 3, params)
        r, rp = rng.uniform(0.1, 2.5, 2)
        z1 = complex(rng.uniform(0.1, 1), rng.uniform(-2, 2))
        z2 = complex(rng.uniform(0.1, 1), rng.uniform(-2, 2))
        worst = max(worst, semigroup_kernel_law(r, rp, z1, z2, sector))
    return worst


def c_ka_residual(params: DeformParams) -> float:
    return abs(c_ka_quadrature(params) / c_ka(params) - 1)


C_KA_TRIPLES = [(1, 1, 0.6), (1, 2, 0), (1, 0.5, 1.2), (2, 1, 0), (2, 2, 0.5), (2, 1.5, (0.3, 0.9)),
                (3, 1, 0), (3, 2, 0), (3, 0.7, (0.2, 0.4, 0.6)), (4, 2, 0.25), (4, 1, 0), (2, 0.8, 2.0)]


def suite_kernels(params=None) -> list:
    configs = [params] if params else KERNEL_CONFIGS
    cases = []
    for p in configs:
        t = _tag(p)
        cases.append(Case(f"eigenrelation[{t}]", "kernel eigenrelation of Omega(gamma_z)", 1e-8,
                          lambda p=p: eigenrelation_worst(p)))
        cases.append(Case(f"semigroup_law[{t}]", "semigroup law of the radial kernels", 1e-7,
                          lambda p=p: semigroup_law_worst(p)))
    triples = [params] if params else [DeformParams(*tr) for tr in C_KA_TRIPLES]
    for p in triples:
        cases.append(Case(f"c_ka[{_tag(p)}]", "normalization constant c_{k,a}", 1e-10,
                          lambda p=p: c_ka_residual(p)))
    return cases


# -------------------------------------------------------------------- weber

WEBER_SETS = [(1, 1.3, 1, 0.5), (2, 0.5, 1.5, 1), (1 + 0.5j, 0.7, 1.2, 0.5), (0.8 - 0.6j, 1.5, 0.4, 2.3),
              (3, 2, 2, 1.7), (0.5 + 1j, 0.3, 0.9, 0.2), (1.5, 1.1, 0.2, 3.0), (0.7 - 0.2j, 0.8, 0.8, 1.0),
              (2.5 + 2j, 1.3, 0.6, 0.7), (1.2, 0.4, 2.2, 4.5)]


def suite_weber(params=None) -> list:
    cases = []
    for i, (d, al, be, nu) in enumerate(WEBER_SETS):
        cases.append(Case(f"weber_first[{i}]", "Weber first exponential integral", 1e-7,
                          lambda d=d, al=al, be=be, nu=nu: weber_check(d, al, be, nu)["first"]))
        cases.append(Case(f"weber_second[{i}]", "Weber second exponential integral", 1e-7,
                          lambda d=d, al=al, be=be, nu=nu, i=i:
                          weber_check(d, al, be, nu, l=1 + i % 3)["second"]))
    return cases


# ---------------------------------------------------------------- transform

TRANSFORM_CONFIGS = [DeformParams(1, 1, 0.7), DeformParams(1, 2, 0.5), DeformParams(1, 1.5, 0.3),
                     DeformParams(2, 2, 0), DeformParams(2, 1, 0), DeformParams(2, 2, (0.5, 1.0))]


def _harmonics(params: DeformParams, degrees=(0, 1, 2)) -> list:
    out = []
    for m in degrees:
        if params.dim == 1 and m > 1:
            continue
        basis = harmonic_basis(m, params, normalized=False)
        if basis:
            out.append(basis[0])
    return out


def plancherel_functions(params: DeformParams) -> list:
    """Five test functions (callable, decay) built from generalized Gaussians."""
    a = float(params.a)
    hs = _harmonics(params, (0, 1, 2))
    h0, h1 = hs[0], hs[1]
    h2 = hs[2] if len(hs) > 2 else hs[0]

    def rad(x):
        return np.linalg.norm(x, axis=-1)

    return [
        (lambda x: np.exp(-rad(x) ** a / a) * h0(x), 1 / a),
        (lambda x: np.exp(-0.8 * rad(x) ** a / a) * h1(x), 0.8 / a),
        (lambda x: np.exp(-1.25 * rad(x) ** a / a) * h2(x), 1.25 / a),
        (lambda x: np.exp(-rad(x) ** a / a) * (h0(x) + (0.5 + 0.3j) * rad(x) ** a * h1(x)), 1 / a),
        (lambda x: np.exp(-rad(x) ** a / a) * (1 + rad(x) ** a) * (h0(x) - 0.7j * h1(x)), 1 / a),
    ]


def plancherel_kernel_worst(params: DeformParams) -> float:
    spec = default_scope(params)
    return max(abs(plancherel_ratio(f, spec, decay=c) - 1) for f, c in plancherel_functions(params))


def random_spectral(params: DeformParams, l_max: int = 6, m_max: int = 2, seed: int = 0):
    rng = np.random.default_rng(seed)
    coeffs = {}
    for m in sector_range(params, m_max):
        for j in range(len(sector_harmonics(params, m))):
            for l in range(l_max + 1):
                coeffs[(l, m, j)] = complex(*rng.normal(size=2))
    return SpectralFunction(params, coeffs, (l_max, m_max))


def hecke_worst(params: DeformParams, n_points: int = 20) -> float:
    spec = default_scope(params)
    xi = np.random.default_rng(5).uniform(-2.5, 2.5, (n_points, params.dim))
    return max(hecke_check(p, spec, xi) for p in _harmonics(params))


def bochner_worst(params: DeformParams) -> float:
    spec = default_scope(params)
    xi = np.random.default_rng(6).uniform(-2, 2, (12, params.dim))
    a = float(params.a)

    def psi(r):
        return np.exp(-r ** a) * (1 + r ** 2)

    return max(bochner_check(p, psi, spec, xi, decay=1.0) for p in _harmonics(params, (0, 1)))


def bound_violations(params: DeformParams, count: int = 100_000, seed: int = 0) -> float:
    """Number of sampled |B(x,y)| > 1 + 1e-12."""
    spec = default_scope(params)
    rng = np.random.default_rng(seed)
    x = rng.uniform(-6, 6, (count, params.dim))
    y = rng.uniform(-6, 6, (count, params.dim))
    return float(np.sum(np.abs(b_kernel(x, y, spec)) > 1 + 1e-12))


def pipelines_residual(params: DeformParams) -> float:
    from .transform import fka_apply_kernel
    from .sl2 import fka_apply_spectral
    f = random_spectral(params, 3, 2, seed=3)
    xi = np.random.default_rng(4).uniform(-2, 2, (15, params.dim))
    kv = fka_apply_kernel(f, default_scope(params), xi).values
    sv = fka_apply_spectral(f)(xi)
    return float(np.max(np.abs(kv - sv)) / np.max(np.abs(sv)))


def suite_transform(params=None) -> list:
    configs = [params] if params else TRANSFORM_CONFIGS
    cases = []
    for p in configs:
        t = _tag(p)
        cases.append(Case(f"plancherel_spectral[{t}]", "Plancherel formula (spectral)", 0.0,
                          lambda p=p: plancherel_spectral_defect(random_spectral(p))))
        try:
            default_scope(p)
        except (ScopeError, DomainError):
            continue
        cases += [
            Case(f"plancherel_kernel[{t}]", "Plancherel formula (kernel quadrature)", 1e-6,
                 lambda p=p: plancherel_kernel_worst(p)),
            Case(f"hecke[{t}]", "Hecke identity", 1e-7, lambda p=p: hecke_worst(p)),
            Case(f"bochner[{t}]", "Bochner identity", 1e-7, lambda p=p: bochner_worst(p)),
            Case(f"kernel_vs_spectral[{t}]", "kernel and spectral transforms agree", 1e-7,
                 lambda p=p: pipelines_residual(p)),
            Case(f"pde_system[{t}]", "kernel differential-difference system", 1e-6,
                 lambda p=p: max(pde_residuals(default_scope(p), n_points=30).values())),
        ]
        if float(p.a) in (1.0, 2.0):
            cases.append(Case(f"bound_violations[{t}]", "|B(x,y)| <= 1", 0.0,
                              lambda p=p: bound_violations(p, 20_000)))
    exact = [p for p in configs if isinstance(p.a, (int, Fraction))] if params else \
        [DeformParams(2, 1, 0.5), DeformParams(2, 2, 0.5), DeformParams(1, Fraction(2, 3), 0.5)]
    for p in exact:
        t = _tag(p)
        try:
            inv = inversion_check(p)
            cases.append(Case(f"inversion_{inv['kind']}[{t}]", "inversion formula (F^2)", 0.0,
                              lambda inv=inv: inv["mismatches"]))
        except ScopeError:
            pass
        cases.append(Case(f"finite_order[{t}]", "F has order 2p for a = p/q", 0.0,
                          lambda p=p: _finite_order_defect(p)))
    return cases


def _finite_order_defect(params: DeformParams) -> float:
    res = finite_order_check(params)
    return 0.0 if res["identity_at_order"] and res["first_identity_power"] == res["order"] else 1.0


# ------------------------------------------------------------------- master

MASTER_CASES = [
    (DeformParams(1, 2, 0), 1.0, 1.0), (DeformParams(1, 1, 0.6), 0.7, -1.2),
    (DeformParams(1, 1.5, 0.4), 0.5, 0.9), (DeformParams(1, 2, 0.8), 0.0, 1.3),
    (DeformParams(1, 1, 0.6), 2.0, 1.5), (DeformParams(1, 0.7, 0.4), 1.5, -2.0),
    (DeformParams(2, 2, 0), (0.5, 1.0), (1.2, -0.3)), (DeformParams(3, 2, 0), (0.3, -0.4, 1.0), (1.0, 0.2, 0.5)),
    (DeformParams(2, 2, (0.5, 1.0)), (0.8, -0.6), (0.4, 1.1)),
]


def suite_master(params=None) -> list:
    cases = []
    if params:
        rng = np.random.default_rng(7)
        pairs = [(rng.uniform(-2, 2, params.dim), rng.uniform(-2, 2, params.dim)) for _ in range(3)]
        todo = [(params, x, y) for x, y in pairs]
    else:
        todo = MASTER_CASES
    for i, (p, x, y) in enumerate(todo):
        try:
            spec = default_scope(p)
            if spec.scope == "k_zero_a1":
                continue
        except (ScopeError, DomainError):
            continue
        cases.append(Case(f"master[{_tag(p)}#{i}]", "master formula", 1e-5,
                          lambda spec=spec, x=x, y=y: master_formula_check(x, y, spec).residual))
    return cases


# --------------------------------------------------------------- heisenberg

def heisenberg_equality(params: DeformParams, c: float) -> float:
    lhs, rhs = heisenberg_product(gaussian_spectral(params, c))
    return abs(lhs / rhs - 1)


def heisenberg_random_margin(params: DeformParams, count: int = 50) -> float:
    """Largest relative violation (rhs - lhs)/rhs over random functions; <= 0 means it holds."""
    worst = -math.inf
    for seed in range(count):
        f = random_spectral(params, 5, 2, seed=100 + seed)
        lhs, rhs = heisenberg_product(f)
        worst = max(worst, (rhs - lhs) / rhs)
    return max(worst, 0.0)


HEISENBERG_CONFIGS = [DeformParams(1, 1, 0.6), DeformParams(2, 1.5, 0.3), DeformParams(3, 2, 0)]


def suite_heisenberg(params=None) -> list:
    configs = [params] if params else HEISENBERG_CONFIGS
    cases = []
    for p in configs:
        t = _tag(p)
        for c in (0.5, 1.0, 2.0):
            cases.append(Case(f"gaussian_c={c:g}[{t}]", "Heisenberg inequality", 1e-8,
                              lambda p=p, c=c: heisenberg_equality(p, c), note="equality"))
        cases.append(Case(f"random_functions[{t}]", "Heisenberg inequality", 0.0,
                          lambda p=p: heisenberg_random_margin(p), note="inequality"))
        cases.append(Case(f"first_excited[{t}]", "Heisenberg inequality", 0.0,
                          lambda p=p: _strict_margin(p), note="strict"))
    return cases


def _strict_margin(params: DeformParams) -> float:
    lhs, rhs = heisenberg_product(basis_function(params, 1, 0))
    return 0.0 if lhs > rhs * (1 + 1e-6) else 1.0


SUITE_FUNCS = {
    "specfun": suite_specfun, "sl2": suite_sl2, "kernels": suite_kernels, "weber": suite_weber,
    "transform": suite_transform, "master": suite_master, "heisenberg": suite_heisenberg,
}


def run_suite(name: str, params: DeformParams | None = None, workers: int = 4) -> dict:
    """{suite, cases: [...]} for one suite or "all"."""
    if name == "all":
        names = SUITES
    elif name in SUITE_FUNCS:
        names = (name,)
    else:
        raise ValueError(f"unknown suite {name!r}; expected one of {SUITES + ('all',)}")
    cases = [c for n in names for c in SUITE_FUNCS[n](params)]
    results = run_cases(cases, workers)
    return {"suite": name, "cases": [r.as_dict() for r in results]}
