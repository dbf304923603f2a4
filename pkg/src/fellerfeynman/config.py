"""Experiment configuration: JSON schema, validation, and object construction.

A config is a single JSON document; see presets/ for one file per worked
example. Validation errors carry the dotted field path (e.g. "grid.N").
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
from scipy.special import erf

from . import steps as steps_mod
from .grid import Grid1D, GridFunction
from .kernels import TransitionKernel
from .symbols import CoefficientFn, ConstantLevy, FractionalPower, Relativistic, Scaled, SymbolSpec


class ConfigError(ValueError):
    def __init__(self, fieldname: str, message: str):
        self.fieldname = fieldname
        super().__init__(f"{fieldname}: {message}")


def _get(d: dict, key: str, path: str, required: bool = True, default=None):
    if key not in d:
        if required:
            raise ConfigError(f"{path}.{key}" if path else key, "missing required field")
        return default
    return d[key]


def build_coefficient(cfg: Any, path: str) -> CoefficientFn:
    if isinstance(cfg, (int, float)):
        return CoefficientFn.constant(float(cfg))
    if not isinstance(cfg, dict):
        raise ConfigError(path, "expected a number or an object with a 'kind' field")
    kind = _get(cfg, "kind", path)
    try:
        if kind == "constant":
            return CoefficientFn.constant(_get(cfg, "value", path))
        if kind == "sinusoidal":
            return CoefficientFn.sinusoidal(
                _get(cfg, "base", path), _get(cfg, "amplitude", path), cfg.get("frequency", 1.0)
            )
        if kind == "tabulated":
            return CoefficientFn.tabulated(_get(cfg, "grid", path), _get(cfg, "values", path))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from exc
    raise ConfigError(f"{path}.kind", f"unknown coefficient kind {kind!r}")


def build_symbol(cfg: dict, path: str = "symbol") -> SymbolSpec:
    variant = _get(cfg, "variant", path)
    try:
        if variant == "fractional_power":
            return FractionalPower(float(_get(cfg, "alpha", path)), build_coefficient(_get(cfg, "a", path), f"{path}.a"))
        if variant == "relativistic":
            return Relativistic(float(_get(cfg, "alpha", path)), build_coefficient(_get(cfg, "m", path), f"{path}.m"))
        if variant == "constant_levy":
            return ConstantLevy(_get(cfg, "psi", path), float(cfg.get("alpha", 2.0)), float(cfg.get("scale", 1.0)))
        if variant == "scaled":
            return Scaled(
                build_coefficient(_get(cfg, "a", path), f"{path}.a"),
                build_symbol(_get(cfg, "inner", path), f"{path}.inner"),
            )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from exc
    raise ConfigError(f"{path}.variant", f"unknown symbol variant {variant!r}")


def build_kernel(cfg: dict, path: str) -> TransitionKernel:
    family = _get(cfg, "family", path)
    try:
        return TransitionKernel(family, float(cfg.get("alpha", 2.0)))
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from exc


def build_datum(cfg: dict, path: str):
    """Named initial-datum family as a callable q -> values (also used as MC observable)."""
    family = _get(cfg, "family", path)
    if family == "gaussian":
        c = float(cfg.get("center", 0.0))
        w = float(cfg.get("width", 1.0))
        if w <= 0:
            raise ConfigError(f"{path}.width", "width must be positive")
        return lambda q: np.exp(-((np.asarray(q, dtype=float) - c) ** 2) / (2.0 * w * w))
    if family == "bump":
        c = float(cfg.get("center", 0.0))
        r = float(cfg.get("radius", 4.0))
        if r <= 0:
            raise ConfigError(f"{path}.radius", "radius must be positive")

        def bump(q):
            u = (np.asarray(q, dtype=float) - c) / r
            out = np.zeros_like(u)
            inside = np.abs(u) < 1.0
            out[inside] = np.exp(1.0 - 1.0 / (1.0 - u[inside] ** 2))
            return out

        return bump
    if family == "indicator_smoothed":
        c = float(cfg.get("center", 0.0))
        r = float(cfg.get("radius", 2.0))
        s = float(cfg.get("smoothing", 0.5))
        if r <= 0 or s <= 0:
            raise ConfigError(path, "radius and smoothing must be positive")
        return lambda q: 0.5 * (
            erf((r - (np.asarray(q, dtype=float) - c)) / (np.sqrt(2.0) * s))
            + erf((r + (np.asarray(q, dtype=float) - c)) / (np.sqrt(2.0) * s))
        )
    raise ConfigError(f"{path}.family", f"unknown initial datum family {family!r}")


def build_step(cfg: dict, symbol: SymbolSpec | None, path: str) -> steps_mod.StepOperator:
    kind = _get(cfg, "type", path)
    if kind == "hamiltonian":
        spec = build_symbol(cfg["symbol"], f"{path}.symbol") if "symbol" in cfg else symbol
        if spec is None:
            raise ConfigError(path, "hamiltonian step needs a symbol (inline or top-level)")
        return steps_mod.HamiltonianStep(spec)
    if kind == "lagrangian":
        a = build_coefficient(_get(cfg, "a", path), f"{path}.a")
        if a.c_lo <= 0:
            raise ConfigError(f"{path}.a", "coefficient a must have a certified positive lower bound")
        return steps_mod.LagrangianStep(a, build_kernel(_get(cfg, "kernel", path), f"{path}.kernel"))
    if kind == "potential":
        return steps_mod.PotentialStep(build_coefficient(_get(cfg, "V", path), f"{path}.V"))
    if kind == "drift":
        return steps_mod.DriftStep(build_coefficient(_get(cfg, "b", path), f"{path}.b"))
    raise ConfigError(f"{path}.type", f"unknown step type {kind!r}")


@dataclass
class McConfig:
    n_paths: int
    seed: int
    n: int
    f: Any
    q0_list: list[float]
    v: CoefficientFn | None = None
    b: CoefficientFn | None = None


@dataclass
class ExperimentConfig:
    raw: dict
    grid: Grid1D
    symbol: SymbolSpec | None
    step: steps_mod.StepOperator
    initial: Any
    time: float
    n: int | None
    n_list: list[int] | None
    mc: McConfig | None
    output: str
    assumption_a_note: str = ""
    labels: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        gcfg = _get(raw, "grid", "")
        half_width = float(_get(gcfg, "L", "grid"))
        n_nodes = _get(gcfg, "N", "grid")
        try:
            grid = Grid1D(half_width, int(n_nodes))
        except ValueError as exc:
            raise ConfigError("grid.N" if "power of two" in str(exc) else "grid.L", str(exc)) from exc

        symbol = build_symbol(raw["symbol"]) if "symbol" in raw else None
        step_cfgs = _get(raw, "steps", "")
        if not isinstance(step_cfgs, list) or not step_cfgs:
            raise ConfigError("steps", "expected a nonempty list of step factors")
        built = [build_step(c, symbol, f"steps[{i}]") for i, c in enumerate(step_cfgs)]
        step = built[0] if len(built) == 1 else steps_mod.CompositeStep(built)

        initial = build_datum(_get(raw, "initial", ""), "initial")
        t = float(_get(raw, "time", ""))
        if t <= 0:
            raise ConfigError("time", "time must be positive")

        n = raw.get("n")
        if n is not None:
            n = int(n)
            if n < 1:
                raise ConfigError("n", "n must be >= 1")
        n_list = raw.get("n_list")
        if n_list is not None:
            n_list = [int(v) for v in n_list]
            if any(v < 1 for v in n_list) or n_list != sorted(n_list):
                raise ConfigError("n_list", "must be ascending, each >= 1")

        mc = None
        if "mc" in raw:
            mcfg = raw["mc"]
            n_paths = int(_get(mcfg, "n_paths", "mc"))
            if n_paths < 100:
                raise ConfigError("mc.n_paths", "must be >= 100")
            mc = McConfig(
                n_paths=n_paths,
                seed=int(mcfg.get("seed", 0)),
                n=int(mcfg.get("n", n if n else 64)),
                f=build_datum(_get(mcfg, "f", "mc"), "mc.f"),
                q0_list=[float(v) for v in mcfg.get("q0_list", [0.0])],
                v=build_coefficient(mcfg["V"], "mc.V") if "V" in mcfg else None,
                b=build_coefficient(mcfg["b"], "mc.b") if "b" in mcfg else None,
            )

        return cls(
            raw=raw,
            grid=grid,
            symbol=symbol,
            step=step,
            initial=initial,
            time=t,
            n=n,
            n_list=n_list,
            mc=mc,
            output=str(raw.get("output", ".")),
            assumption_a_note=str(raw.get("assumption_a_note", "")),
        )

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError("<file>", f"cannot read config {path}: {exc}") from exc
        return cls.from_dict(raw)

    def config_hash(self) -> str:
        return hashlib.sha256(json.dumps(self.raw, sort_keys=True, separators=(",", ":")).encode()).hexdigest()[:16]

    def initial_state(self) -> GridFunction:
        return GridFunction.from_callable(self.grid, self.initial)
