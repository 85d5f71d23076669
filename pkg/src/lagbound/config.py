"""Experiment configuration: JSON ingestion, patch/curve spec parsing, defaults.

Patch specs are structured text: name, length, halfwidth, kappa and gauss as
numbers or expression strings in `s` (and `t` for gauss), and the grid.  Curve
specs on the command line use a compact form:

    parallel:<c>          constant graph t = c
    cos:<a>,<m>           graph t = a cos(m * 2 pi s / l)
    expr:<python expr>    graph from an expression in s (numpy namespace)
    csv:<path>            sampled graph, CSV rows "s,xi" (spectral derivatives)
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .curves import Curve, trig_curve
from .errors import ConfigError
from .surface import BaseCurve, SurfacePatch, solve_warp

__all__ = ["ExperimentConfig", "load_config", "build_patch_from_spec",
           "parse_curve_spec", "DEFAULT_TOLERANCES"]

DEFAULT_TOLERANCES = {
    "taylor_order": 2.9,
    "curvature_rel": 1e-8,
    "radial_factor": 2.0,
    "area_residual": 1e-12,
    "contraction_curvature": 1e-6,
    "contraction_tameness": 5e-3,
    "parabola_residual": 1e-6,
    "monotonicity": 1e-8,
    "tameness_limit": 5e-3,
    "comparison": 5e-3,
    "lipschitz_slack": 1e-11,
}

ALL_CHECKS = (
    "warp_taylor",
    "exact_shift",
    "contraction_curvature",
    "contraction_tameness",
    "graph_sandwich",
    "graph_curvature_monotone",
    "fiber_norm_parabola",
    "conformal_tameness",
    "radial_hausdorff",
    "contraction_hausdorff",
)

_SAFE_NAMES = {name: getattr(np, name) for name in (
    "sin", "cos", "tan", "exp", "log", "sqrt", "abs", "sinh", "cosh", "tanh",
    "arctan", "arcsin", "arccos", "pi", "e")}
_SAFE_NAMES["np"] = np


def _expr_callable(spec, variables):
    if isinstance(spec, (int, float)):
        const = float(spec)
        if variables == ("s",):
            return lambda s: const + 0.0 * np.asarray(s, dtype=float)
        return lambda s, t: const + 0.0 * np.asarray(s, dtype=float)
    if not isinstance(spec, str):
        raise ConfigError(f"expression spec must be a number or string: {spec!r}")
    code = compile(spec, "<config>", "eval")
    for name in code.co_names:
        if name not in _SAFE_NAMES and name not in variables:
            raise ConfigError(f"name {name!r} not allowed in expression {spec!r}")
    if variables == ("s",):
        return lambda s: np.asarray(
            eval(code, {"__builtins__": {}}, {**_SAFE_NAMES, "s": s}),
            dtype=float) + 0.0 * np.asarray(s, dtype=float)
    return lambda s, t: np.asarray(
        eval(code, {"__builtins__": {}}, {**_SAFE_NAMES, "s": s, "t": t}),
        dtype=float) + 0.0 * np.asarray(s, dtype=float)


@dataclass
class ExperimentConfig:
    seed: int = 0
    out_dir: str = "out"
    grid: tuple = (2048, 513)
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    checks: dict = field(default_factory=lambda: {c: True for c in ALL_CHECKS})
    patches: dict = field(default_factory=dict)
    quick: bool = False

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        cfg = cls()
        known = {"seed", "out_dir", "grid", "tolerances", "checks", "patches",
                 "quick"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg.seed = int(data.get("seed", cfg.seed))
        cfg.out_dir = str(data.get("out_dir", cfg.out_dir))
        cfg.quick = bool(data.get("quick", cfg.quick))
        if "grid" in data:
            grid = data["grid"]
            if len(grid) != 2:
                raise ConfigError("grid must be [n_s, n_t]")
            cfg.grid = (int(grid[0]), int(grid[1]))
        tols = data.get("tolerances", {})
        for key, val in tols.items():
            if key not in DEFAULT_TOLERANCES:
                raise ConfigError(f"unknown tolerance {key!r}")
            if not float(val) >= 0:
                raise ConfigError(f"tolerance {key!r} must be nonnegative")
            cfg.tolerances[key] = float(val)
        for key, val in data.get("checks", {}).items():
            if key not in ALL_CHECKS:
                raise ConfigError(f"unknown check {key!r}")
            cfg.checks[key] = bool(val)
        cfg.patches = dict(data.get("patches", {}))
        return cfg


def load_config(path: str | None) -> ExperimentConfig:
    if path is None:
        return ExperimentConfig()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    return ExperimentConfig.from_dict(data)


def build_patch_from_spec(spec: dict) -> SurfacePatch:
    """Patch from a structured description: name, length, halfwidth,
    kappa/gauss specs, grid."""
    try:
        length = float(spec["length"])
        halfwidth = float(spec["halfwidth"])
    except KeyError as exc:
        raise ConfigError(f"patch spec missing {exc}") from exc
    kappa = _expr_callable(spec.get("kappa", 0.0), ("s",))
    gauss = _expr_callable(spec.get("gauss", 0.0), ("s", "t"))
    grid = tuple(spec.get("grid", (2048, 513)))
    base = BaseCurve(length, kappa, gauss, name=str(spec.get("name", "config")))
    return solve_warp(base, halfwidth, grid)


def parse_curve_spec(text: str, patch: SurfacePatch, n: int = 2048) -> Curve:
    kind, _, rest = text.partition(":")
    if kind == "parallel":
        try:
            c = float(rest)
        except ValueError as exc:
            raise ConfigError(f"bad parallel spec {text!r}") from exc
        return Curve.constant(patch, c, n=n)
    if kind == "cos":
        try:
            a_str, m_str = rest.split(",")
            a, m = float(a_str), int(m_str)
        except ValueError as exc:
            raise ConfigError(f"bad cos spec {text!r} (want cos:a,m)") from exc
        return trig_curve(patch, {m: a}, n=n, name=f"cos_m{m}_a{a:g}")
    if kind == "expr":
        fn = _expr_callable(rest, ("s",))
        return Curve.from_callables(patch, fn, n=n, name=f"expr_{rest[:24]}")
    if kind == "csv":
        try:
            data = np.loadtxt(rest, delimiter=",", comments="#")
        except OSError as exc:
            raise ConfigError(f"cannot read curve CSV {rest}: {exc}") from exc
        if data.ndim != 2 or data.shape[1] < 2:
            raise ConfigError(f"curve CSV {rest} must have rows s,xi")
        return Curve.from_samples(patch, data[:, 1], name=f"csv_{rest}")
    raise ConfigError(f"unknown curve spec {text!r}")
