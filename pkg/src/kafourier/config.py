"""Run configuration: flat TOML file, overridden key by key by CLI flags."""
from __future__ import annotations

import os
import sys
from dataclasses import dataclass, fields, replace
from fractions import Fraction
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .dunkl import DeformParams

CONFIG_ENV = "KAFOURIER_CONFIG"
DEFAULT_CONFIG = "kafourier.toml"


def parse_number(text):
    """int, Fraction ("2/3") or float from a string; numbers pass through."""
    if not isinstance(text, str):
        return text
    text = text.strip()
    if "/" in text:
        return Fraction(text)
    try:
        return int(text)
    except ValueError:
        return float(text)


def parse_k(value):
    if isinstance(value, (list, tuple)):
        return tuple(parse_number(v) for v in value)
    if isinstance(value, str) and "," in value:
        return tuple(parse_number(v) for v in value.split(","))
    return parse_number(value)


def parse_complex(text) -> complex:
    """Accepts "0.5", "0+1.57i", "1.2-0.3j" or a number."""
    if not isinstance(text, str):
        return complex(text)
    return complex(text.strip().replace(" ", "").replace("i", "j"))


@dataclass(frozen=True)
class RunConfig:
    N: int = 1
    a: object = 2
    k: object = 0
    scope: str | None = None
    z: str = "0.5"
    kind: str = "auto"
    x_min: float = -2.0
    x_max: float = 2.0
    count: int = 5
    seed: int = 0
    l_max: int = 40
    m_max: int = 4
    n_radial: int = 64
    n_sphere: int | None = None
    max_defect: float = 1e-6
    suite: str = "all"
    workers: int = 4
    format: str = "csv"
    output: str | None = None

    def params(self) -> DeformParams:
        return DeformParams(int(self.N), parse_number(self.a), parse_k(self.k))

    def with_overrides(self, **kw) -> "RunConfig":
        known = {f.name for f in fields(self)}
        return replace(self, **{k: v for k, v in kw.items() if k in known and v is not None})


def config_path(explicit: str | None = None) -> Path | None:
    """--config wins, then the environment variable, then ./kafourier.toml if present."""
    if explicit:
        return Path(explicit)
    env = os.environ.get(CONFIG_ENV)
    if env:
        return Path(env)
    default = Path(DEFAULT_CONFIG)
    return default if default.exists() else None


def load_config(path: Path | None) -> RunConfig:
    if path is None:
        return RunConfig()
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(unknown)}")
    return RunConfig().with_overrides(**data)
