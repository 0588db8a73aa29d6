"""Command line interface: kernel tables, sampled transforms, spectra, verification."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np
from scipy.interpolate import CubicSpline

from .config import RunConfig, config_path, load_config, parse_complex
from .errors import ConvergenceError, DomainError, ScopeError
from .kernels import lambda_full, lambda_sector_sum
from .sl2 import SampledRadialFunction, expand, fka_apply_spectral, spectrum
from .transform import BKernelSpec, b_kernel, default_scope
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CONVERGENCE = 0, 1, 2, 3
B_POINT = 0.5j * math.pi


class UsageError(ValueError):
    """Bad flags, config or input file."""


# ------------------------------------------------------------------ output

def _num(v) -> str:
    return repr(float(v))


def _write(text: str, output: str | None):
    if output:
        with open(output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_table(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_num(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# ------------------------------------------------------------------ kernel

def _kernel_points(cfg: RunConfig, dim: int) -> np.ndarray:
    if dim == 1:
        return np.linspace(cfg.x_min, cfg.x_max, cfg.count)[:, None]
    rng = np.random.default_rng(cfg.seed)
    return rng.uniform(cfg.x_min, cfg.x_max, size=(cfg.count, dim))


def kernel_table(cfg: RunConfig) -> tuple:
    """Rows x..., y..., z, value, provenance over a count x count grid of point pairs."""
    params = cfg.params()
    z = parse_complex(cfg.z)
    kind = cfg.kind
    if kind == "auto":
        kind = "b" if abs(z - B_POINT) < 1e-6 else "lambda"
    if kind not in ("b", "lambda"):
        raise UsageError(f"unknown kernel kind {cfg.kind!r}")
    if params.dim == 1:
        if not 2 * float(params.k[0]) > 1 - float(params.a):
            raise DomainError("2k > 1 - a violated")
    elif not params.supports_kernel():
        raise DomainError("2<k> + N > max(1, 2 - a) violated")
    closed = params.dim == 1 or params.k_zero
    spec = None
    if kind == "b":
        z = B_POINT
        try:
            spec = default_scope(params) if cfg.scope is None else BKernelSpec(params, cfg.scope)
        except ScopeError:
            if cfg.scope is not None:
                raise
    pts = _kernel_points(cfg, params.dim)
    phase = np.exp(1j * math.pi * float(params.mu) / (2 * float(params.a)))
    rows = []
    for x in pts:
        for y in pts:
            if spec is not None:
                val, prov = complex(b_kernel(x, y, spec)), f"b_{spec.scope}"
            else:
                ev = (lambda_full(x, y, z, params) if closed
                      else lambda_sector_sum(x, y, z, params, m_max=cfg.m_max))
                val, prov = complex(ev.value), ev.provenance
                if kind == "b":
                    val, prov = phase * val, f"b_from_lambda_{prov}"
            rows.append([*map(float, x), *map(float, y), z.real, z.imag, val.real, val.imag, prov])
    dim = params.dim
    columns = ([f"x{i + 1}" for i in range(dim)] + [f"y{i + 1}" for i in range(dim)]
               + ["z_re", "z_im", "val_re", "val_im", "provenance"])
    return columns, rows


def _render_kernel(columns, rows, fmt, dim) -> str:
    if fmt == "csv":
        return _csv_table(columns, rows)
    recs = [{"x": r[:dim], "y": r[dim:2 * dim], "z": r[2 * dim:2 * dim + 2],
             "value": r[2 * dim + 2:2 * dim + 4], "provenance": r[-1]} for r in rows]
    return _json({"kernel": recs})


# --------------------------------------------------------------- transform

def read_samples(path: str, dim: int) -> tuple:
    """(kind, coords, values) from a CSV with header r,... or x1..xN,value_re,value_im."""
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise UsageError(f"{path}: empty sample file")
    header = [c.strip() for c in rows[0]]
    if header[-2:] != ["value_re", "value_im"]:
        raise UsageError(f"{path}: header must end with value_re,value_im")
    coords = header[:-2]
    if coords == ["r"]:
        kind = "radial"
    elif coords == [f"x{i + 1}" for i in range(dim)]:
        kind = "cartesian"
    else:
        raise UsageError(f"{path}: expected coordinate columns r or x1..x{dim}")
    try:
        data = np.array([[float(c) for c in r] for r in rows[1:]], dtype=float)
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from exc
    if data.ndim != 2 or data.shape[0] < 4 or data.shape[1] != len(header):
        raise UsageError(f"{path}: need at least 4 complete sample rows")
    return kind, data[:, :-2], data[:, -2] + 1j * data[:, -1]


def _interpolant(t: np.ndarray, v: np.ndarray):
    """Cubic spline through the samples, zero outside the sampled interval."""
    order = np.argsort(t)
    t, v = t[order], v[order]
    if np.any(np.diff(t) <= 0):
        raise UsageError("sample coordinates must be distinct")
    re, im = CubicSpline(t, v.real), CubicSpline(t, v.imag)
    lo, hi = t[0], t[-1]

    def f(s):
        s = np.asarray(s, dtype=float)
        inside = (s >= lo) & (s <= hi)
        return np.where(inside, re(s) + 1j * im(s), 0.0)
    return f, lo


def transform_samples(cfg: RunConfig, path: str, power: int = 1) -> tuple:
    params = cfg.params()
    kind, coords, values = read_samples(path, params.dim)
    if kind == "radial":
        spline, lo = _interpolant(coords[:, 0], values)
        if lo < 0:
            raise UsageError("radial samples need r >= 0")
        fun = lambda x: spline(np.linalg.norm(x, axis=-1))
        m_max = 0
        out_pts = coords[:, 0][:, None] * np.eye(params.dim)[0]
    elif params.dim == 1:
        spline, _ = _interpolant(coords[:, 0], values)
        fun = lambda x: spline(np.asarray(x)[..., 0])
        m_max = 1
        out_pts = coords
    else:
        raise ScopeError("scattered samples need N = 1; give a radial profile r,value_re,value_im")
    sampled = SampledRadialFunction.from_function(fun, params, m_max)
    spec = expand(sampled, params, truncation=(cfg.l_max, m_max), max_defect=cfg.max_defect)
    image = fka_apply_spectral(spec, power)
    out = image(out_pts)
    before = spec.norm2()
    after = sum(abs(c) ** 2 for c in image.vector().values())
    ratio = math.sqrt(after / before) if before > 0 else 1.0
    diagnostics = {"norm_ratio": ratio, "parseval_defect": spec.defect,
                   "truncation": list(spec.truncation), "power": power,
                   "input_kind": kind, "interpolated": True}
    columns = (["r"] if kind == "radial" else [f"x{i + 1}" for i in range(params.dim)])
    rows = [[*map(float, c), complex(v).real, complex(v).imag] for c, v in zip(coords, out)]
    return columns + ["value_re", "value_im"], rows, diagnostics


# -------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat TOML file (default: $KAFOURIER_CONFIG or ./kafourier.toml)")
    common.add_argument("--N", type=int, help="dimension")
    common.add_argument("--a", help="deformation parameter a > 0 (int, float or p/q)")
    common.add_argument("--k", help="multiplicity: one value or a comma list of N values")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--output", help="write here instead of stdout")

    p = argparse.ArgumentParser(prog="kafourier", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kernel", parents=[common], help="kernel table on a point grid")
    k.add_argument("--z", help="complex time, e.g. 0.5 or 0+1.5707963i")
    k.add_argument("--kind", choices=("auto", "lambda", "b"),
                   help="auto gives B at z = i pi/2 and Lambda elsewhere")
    k.add_argument("--scope", help="closed-form scope for B")
    k.add_argument("--x-min", dest="x_min", type=float)
    k.add_argument("--x-max", dest="x_max", type=float)
    k.add_argument("--count", type=int, help="points per axis (N = 1) or random points (N > 1)")
    k.add_argument("--seed", type=int)
    k.add_argument("--m-max", dest="m_max", type=int, help="sector cutoff for series kernels")

    t = sub.add_parser("transform", parents=[common], help="F_{k,a} of sampled data")
    t.add_argument("input", help="CSV with r,value_re,value_im or x1..xN,value_re,value_im")
    t.add_argument("--power", type=int, default=1)
    t.add_argument("--l-max", dest="l_max", type=int)
    t.add_argument("--max-defect", dest="max_defect", type=float)

    s = sub.add_parser("spectrum", parents=[common], help="eigenvalues of the deformed oscillator")
    s.add_argument("--count", type=int)

    v = sub.add_parser("verify", parents=[common], help="run identity checks")
    v.add_argument("--suite", choices=SUITES + ("all",))
    v.add_argument("--workers", type=int)
    return p


def _resolve(args) -> RunConfig:
    cfg = load_config(config_path(args.config))
    flags = {k: v for k, v in vars(args).items() if k not in ("config", "command")}
    return cfg.with_overrides(**flags)


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = _resolve(args)
    if args.command == "kernel":
        columns, rows = kernel_table(cfg)
        _write(_render_kernel(columns, rows, cfg.format, cfg.params().dim), cfg.output)
        return EXIT_OK
    if args.command == "transform":
        columns, rows, diag = transform_samples(cfg, args.input, args.power)
        if cfg.format == "csv":
            _write(_csv_table(columns, rows), cfg.output)
            sys.stderr.write(json.dumps(diag) + "\n")
        else:
            recs = [dict(zip(columns[:-2], r[:-2]), value=r[-2:]) for r in rows]
            _write(_json({"values": recs, "diagnostics": diag}), cfg.output)
        return EXIT_OK
    if args.command == "spectrum":
        count = cfg.count if args.count is None else args.count
        if count < 0:
            raise UsageError("--count must be >= 0")
        entries = spectrum(cfg.params(), count)
        if cfg.format == "csv":
            rows = [[float(e.value), e.l, e.m, e.multiplicity] for e in entries]
            _write(_csv_table(["eigenvalue", "l", "m", "multiplicity"], rows), cfg.output)
        else:
            _write(_json({"spectrum": [{"eigenvalue": float(e.value), "l": e.l, "m": e.m,
                                        "multiplicity": e.multiplicity} for e in entries]}),
                   cfg.output)
        return EXIT_OK
    report = run_suite(cfg.suite, None, cfg.workers)
    if cfg.format == "csv":
        keys = ["name", "paper_ref", "residual", "tolerance", "pass"]
        _write(_csv_table(keys, [[c[k] for k in keys] for c in report["cases"]]), cfg.output)
    else:
        _write(_json(report), cfg.output)
    return EXIT_OK if all(c["pass"] for c in report["cases"]) else EXIT_FAIL


def main(argv=None) -> int:
    try:
        return run(argv)
    except SystemExit as exc:  # argparse usage errors exit with 2 already
        return int(exc.code or 0)
    except ConvergenceError as exc:
        print(f"kafourier: convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (UsageError, DomainError, ScopeError, ValueError, OSError) as exc:
        print(f"kafourier: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
