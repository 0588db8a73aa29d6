"""The eighteen acceptance criteria at their stated tolerances.

Each criterion reduces to one residual compared against a tolerance. Results
are collected in RESULTS and printed one line per criterion by the terminal
summary hook in conftest.py; ``python3 tests/test_acceptance.py`` prints the
same lines without pytest.
"""
from __future__ import annotations

import time
from fractions import Fraction

import numpy as np
import pytest

from kafourier.dunkl import DeformParams
from kafourier.transform import (BKernelSpec, default_scope, finite_order_check, inversion_check,
                                 master_formula_check, pde_residuals, plancherel_spectral_defect)
from kafourier import verify as V

RESULTS: dict = {}


def _max(values):
    return max(float(v) for v in values)


def c01():
    return _max(V.laguerre_gram_residual(lam) for lam in (-0.4, 0.0, 2.5))


def c02():
    return _max(V.laguerre_semigroup_residual(10, lam, c)
                for lam in (Fraction(3, 2), Fraction(0), Fraction(-2, 5))
                for c in (Fraction(2, 3), Fraction(1), Fraction(5, 2)))


def c03():
    return _max(V.hille_hardy_residual(lam) for lam in (0.3, 1.7))


def c04():
    return _max(V.expansion_residual(nu) for nu in (0.5, 1.5))


def c05():
    return V.i_fun_residual(V.i_fun_grid(500))


def c06():
    return _max(V.sl2_residual(p, 16) for p in V.SL2_CONFIGS)


def c07():
    return _max(V.eigenrelation_worst(p, 6, (0.4, 0.4 + 1j)) for p in V.KERNEL_CONFIGS)


def c08():
    return _max(V.semigroup_law_worst(p, 20) for p in V.KERNEL_CONFIGS)


def c09():
    from kafourier.kernels import weber_check
    return _max(max(weber_check(d, al, be, nu, l=1 + i % 3).values())
                for i, (d, al, be, nu) in enumerate(V.WEBER_SETS))


def c10():
    exact = [DeformParams(p.dim, Fraction(p.a), p.k) for p in V.TRANSFORM_CONFIGS]
    spectral = _max(plancherel_spectral_defect(V.random_spectral(p, seed=s))
                    for p in exact for s in range(3))
    if spectral != 0.0:
        return float("inf")
    return _max(V.plancherel_kernel_worst(p) for p in V.TRANSFORM_CONFIGS)


def c11():
    bad = 0
    for p in (DeformParams(1, 1, 0.6), DeformParams(2, 1, 0.5), DeformParams(1, 2, 0.3),
              DeformParams(3, 2, (0, 0.5, 1))):
        bad += inversion_check(p)["mismatches"]
    for a in (Fraction(1, 2), Fraction(2, 3), Fraction(3, 2)):
        res = finite_order_check(DeformParams(2, a, 0.5))
        bad += not (res["order"] == 2 * a.numerator and res["identity_at_order"]
                    and res["first_identity_power"] == res["order"])
    return float(bad)


def c12():
    return _max(V.hecke_worst(p) for p in V.TRANSFORM_CONFIGS)


def c13():
    return _max(V.bochner_worst(p) for p in V.TRANSFORM_CONFIGS if float(p.a) in (1.0, 2.0))


def c14():
    return _max(master_formula_check(x, y, default_scope(p)).residual for p, x, y in V.MASTER_CASES)


# N = 1, a = 1 needs k >= 1/2 for the bound; see test_transform for smaller k
BOUND_CONFIGS = [DeformParams(1, 1, 0.6), DeformParams(1, 1, 0.5), DeformParams(1, 2, 0.5),
                 DeformParams(1, 2, 0), DeformParams(2, 1, 0), DeformParams(2, 2, 0),
                 DeformParams(2, 2, (0.5, 1.0))]


def c15():
    return sum(V.bound_violations(p, 100_000) for p in BOUND_CONFIGS)


def c16():
    worst = 0.0
    for p in V.HEISENBERG_CONFIGS:
        if V.heisenberg_random_margin(p, 50) > 0:
            return float("inf")
        worst = max(worst, _max(V.heisenberg_equality(p, c) for c in (0.5, 1.0, 2.0)))
    return worst


PDE_SPECS = [BKernelSpec(DeformParams(1, 1, 0.6), "rank_one"),
             BKernelSpec(DeformParams(1, 2, 0.5), "rank_one"),
             BKernelSpec(DeformParams(1, 1.5, 0.3), "rank_one"),
             BKernelSpec(DeformParams(2, 1, 0), "k_zero_a1"),
             BKernelSpec(DeformParams(3, 1, 0), "k_zero_a1"),
             BKernelSpec(DeformParams(2, 2, 0), "k_zero_a2")]


def c17():
    return _max(max(pde_residuals(spec, n_points=100).values()) for spec in PDE_SPECS)


def c18():
    assert len(V.C_KA_TRIPLES) == 12
    return _max(V.c_ka_residual(DeformParams(*t)) for t in V.C_KA_TRIPLES)


CRITERIA = [
    (1, "Laguerre orthogonality", 1e-10, c01),
    (2, "Laguerre semigroup representation (exact)", 0.0, c02),
    (3, "Hille-Hardy formula", 1e-9, c03),
    (4, "Gegenbauer expansions", 1e-9, c04),
    (5, "I(b,nu;w;t) closed forms", 1e-10, c05),
    (6, "sl2 relations", 1e-10, c06),
    (7, "kernel eigenrelation", 1e-8, c07),
    (8, "semigroup law", 1e-7, c08),
    (9, "Weber integrals", 1e-7, c09),
    (10, "Plancherel", 1e-6, c10),
    (11, "inversion and finite order (mismatches)", 0.0, c11),
    (12, "Hecke identity", 1e-7, c12),
    (13, "Bochner identity", 1e-7, c13),
    (14, "master formula", 1e-5, c14),
    (15, "|B| <= 1 (violations)", 0.0, c15),
    (16, "Heisenberg inequality", 1e-8, c16),
    (17, "kernel PDE system", 1e-6, c17),
    (18, "normalization c_{k,a}", 1e-10, c18),
]


def evaluate(num, title, tol, fn) -> tuple:
    t0 = time.perf_counter()
    res = float(fn())
    elapsed = time.perf_counter() - t0
    ok = bool(np.isfinite(res) and res <= tol)
    line = (f"[{'PASS' if ok else 'FAIL'}] {num:2d} {title}: residual {res:.3e} "
            f"(tol {tol:.0e}, {elapsed:.1f} s)")
    return ok, line, elapsed


@pytest.mark.parametrize("num,title,tol,fn", CRITERIA, ids=[f"c{c[0]:02d}" for c in CRITERIA])
def test_criterion(num, title, tol, fn):
    ok, line, elapsed = evaluate(num, title, tol, fn)
    RESULTS[num] = line
    print(line)
    assert ok, line
    assert elapsed < 30.0, f"criterion {num} took {elapsed:.1f} s"


if __name__ == "__main__":
    for crit in CRITERIA:
        print(evaluate(*crit)[1], flush=True)
