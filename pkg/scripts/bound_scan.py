"""Largest |B_{k,a}(x, y)| on a grid, as a function of k, for N = 1.

For a = 2 the maximum stays at 1 for every k. For a = 1 it exceeds 1 once
k drops below about 1/2.
"""
import argparse

import numpy as np

from kafourier import DeformParams, b_kernel, default_scope


def peak(k: float, a: float, extent: float = 8.0, n: int = 400) -> float:
    x = np.linspace(-extent, extent, n)
    spec = default_scope(DeformParams(1, a, k))
    return float(np.abs(b_kernel(x[:, None, None], x[None, :, None], spec)).max())


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--a", type=float, nargs="+", default=[1.0, 2.0])
    p.add_argument("--k", type=float, nargs="+", default=[0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.75, 1.0, 2.0])
    args = p.parse_args()
    print("a,k,max_abs_B")
    for a in args.a:
        for k in args.k:
            if 2 * k > 1 - a:
                print(f"{a:g},{k:g},{peak(k, a):.6f}")


if __name__ == "__main__":
    main()
