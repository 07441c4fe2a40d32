"""Input loading, run configuration and deterministic report output."""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import catalog
from .approx_fbp import TaylorSeries
from .blaschke import FiniteBlaschkeProduct
from .disc import BoundaryGrid, FourierCoefficients, _is_power_of_two
from .errors import PreconditionError
from .inner import R_LADDER, InnerFunction
from .numrange import matrix_from_json

THREADS_ENV = "BLASCHKE_LAB_THREADS"


@dataclass
class RunConfig:
    """Settings shared by all subcommands; overridable by a ``key = value`` file."""

    grid_n: int = 1024
    seed: int | None = None
    order_cap: int = 64
    item_cap: int = 4**8
    r_ladder: tuple = R_LADDER
    bs_tol: float = 1e-8
    angles: int = 720
    threads: int = 1

    def __post_init__(self):
        self.validate()

    def validate(self):
        if not (_is_power_of_two(self.grid_n) and self.grid_n >= 64):
            raise PreconditionError(f"grid_n must be a power of two >= 64, got {self.grid_n}")
        if self.bs_tol <= 0:
            raise PreconditionError("tolerances must be positive")
        if self.order_cap < 1 or self.item_cap < 1 or self.threads < 1:
            raise PreconditionError("caps and thread counts must be positive")

    @classmethod
    def from_file(cls, path, base=None):
        cfg = base or cls()
        keys = {f.name for f in fields(cls)}
        for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise PreconditionError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in keys:
                raise PreconditionError(f"{path}:{lineno}: unknown config key {key!r}")
            setattr(cfg, key, _parse_value(key, value))
        cfg.validate()
        return cfg

    def with_env(self, environ=None):
        raw = (environ if environ is not None else os.environ).get(THREADS_ENV)
        if raw:
            try:
                self.threads = max(1, int(raw))
            except ValueError:
                raise PreconditionError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
        return self

    def to_json(self):
        return {"grid_n": self.grid_n, "seed": self.seed, "order_cap": self.order_cap,
                "item_cap": self.item_cap, "r_ladder": list(self.r_ladder), "bs_tol": self.bs_tol,
                "angles": self.angles}


def _parse_value(key, value):
    try:
        if key == "r_ladder":
            return tuple(float(v) for v in value.split(","))
        if key == "bs_tol":
            return float(value)
        if key == "seed" and value.lower() in ("", "none"):
            return None
        return int(value)
    except ValueError:
        raise PreconditionError(f"config value for {key!r} is malformed: {value!r}") from None


# -- inputs ---------------------------------------------------------------------


def load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise PreconditionError(f"cannot read JSON from {path}: {exc}") from exc


def object_from_json(data):
    """Dispatch on the keys of one of the documented JSON schemas."""
    if not isinstance(data, dict):
        raise PreconditionError("input JSON must be an object")
    if "values" in data:
        return BoundaryGrid.from_json(data)
    if "atoms" in data or "fbp" in data:
        return InnerFunction.from_json(data)
    if "zeros" in data:
        return FiniteBlaschkeProduct.from_json(data)
    if "re" in data:
        return matrix_from_json(data)
    if "coeffs" in data:
        return FourierCoefficients.from_json(data)
    raise PreconditionError("unrecognized input JSON schema")


def load_object(name_or_path, grid_n=1024):
    """A catalog name or the path of a JSON file."""
    if Path(name_or_path).suffix == ".json" or os.path.sep in name_or_path:
        return object_from_json(load_json(name_or_path))
    return catalog.resolve(name_or_path, grid_n)


def as_taylor(obj):
    """Analytic coefficients as a :class:`TaylorSeries` (negative indices must vanish)."""
    if isinstance(obj, TaylorSeries):
        return obj
    if isinstance(obj, FourierCoefficients):
        if np.max(np.abs(obj.negative_part()), initial=0.0) > 0.0:
            raise PreconditionError("coefficient file has negative-index terms; expected a power series")
        return TaylorSeries(obj.values[obj.m:])
    raise PreconditionError(f"expected a power series, got {type(obj).__name__}")


def as_grid(obj, grid_n):
    """Boundary samples of any supported object on an ``n``-point grid."""
    if isinstance(obj, BoundaryGrid):
        return obj
    if isinstance(obj, (TaylorSeries, FiniteBlaschkeProduct, FourierCoefficients)):
        return BoundaryGrid.from_function(obj.evaluate, grid_n)
    raise PreconditionError(f"cannot sample {type(obj).__name__} on the circle")


# -- outputs -----------------------------------------------------------------------


def _default(obj):
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.generic):
        return obj.item() if not np.iscomplexobj(obj) else [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _clean(obj):
    # JSON has no inf/nan; they become strings so the output stays valid
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def dumps(report):
    return json.dumps(_clean(json.loads(json.dumps(report, default=_default))), indent=2, allow_nan=False)


def write_grid_csv(path, theta, columns):
    """CSV with ``theta`` and the real and imaginary part of each named column."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        names = list(columns)
        w.writerow(["theta"] + [f"{n}_{p}" for n in names for p in ("re", "im")])
        for i, t in enumerate(theta):
            row = [repr(float(t))]
            for n in names:
                v = complex(columns[n][i])
                row += [repr(v.real), repr(v.imag)]
            w.writerow(row)
