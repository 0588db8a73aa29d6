"""Deformed Laguerre semigroups and (k,a)-generalized Fourier transforms for Z_2^N."""
from .dunkl import DeformParams, PolyND, dunkl_apply, dunkl_laplacian, harmonic_basis
from .errors import ConvergenceError, DomainError, PoleError, ScopeError
from .kernels import c_ka, lambda_full, lambda_m, lambda_sector_sum
from .sl2 import (RadialSector, SampledRadialFunction, SpectralFunction, expand,
                  fka_apply_spectral, semigroup_apply, spectrum)
from .transform import BKernelSpec, b_kernel, default_scope, fka_apply_kernel, hankel

__all__ = [
    "BKernelSpec", "ConvergenceError", "DeformParams", "DomainError", "PoleError", "PolyND",
    "RadialSector", "SampledRadialFunction", "ScopeError", "SpectralFunction", "b_kernel",
    "c_ka", "default_scope", "dunkl_apply", "dunkl_laplacian", "expand", "fka_apply_kernel",
    "fka_apply_spectral", "hankel", "harmonic_basis", "lambda_full", "lambda_m",
    "lambda_sector_sum", "semigroup_apply", "spectrum",
]
