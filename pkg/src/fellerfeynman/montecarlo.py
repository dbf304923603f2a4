"""Frozen-coefficient Markov chains and weighted functional-integral estimators.

A chain step freezes the state-dependent symbol parameters at the current
position Y(k) and draws one constant-coefficient increment over t/n. For the
symbol a(q)|p|^alpha the frozen increment has characteristic function
e^{-(t/n) a(Y(k)) |p|^alpha}, i.e. scale (a(Y(k)) t/n)^{1/alpha}.

Variance convention (the factor-of-two trap): the symbol |p|^2/2 is standard
Brownian motion with increment variance t/n per step, while a(q)|p|^2 freezes
to variance 2 a(Y(k)) t/n. The drift weight uses the left-endpoint (Ito)
discretization of int b dxi.

Paths are sharded; each shard derives its stream from (seed, shard index) and
moments merge in shard order, so results are reproducible bit-for-bit for a
fixed seed regardless of worker count.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .kernels import sample_standard_stable
from .symbols import ConstantLevy, FractionalPower, Scaled, SymbolSpec

SHARD_SIZE = 20_000


class SamplingLawError(ValueError):
    """Symbol has no known constant-coefficient sampling law."""


@dataclass(frozen=True)
class ChainPath:
    positions: np.ndarray  # n+1 values, Y(0) = q0
    increments: np.ndarray  # n values
    step: float


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    n_paths: int
    n_steps: int


def _frozen_increments(spec: SymbolSpec, y: np.ndarray, dt: float, rng: np.random.Generator) -> np.ndarray:
    """Increments with cf e^{-dt * H(y, p)}, parameters frozen at positions y."""
    if isinstance(spec, FractionalPower):
        scale = (np.maximum(np.asarray(spec.a(y), dtype=float), 0.0) * dt) ** (1.0 / spec.alpha)
        return scale * sample_standard_stable(spec.alpha, y.shape, rng)
    if isinstance(spec, ConstantLevy):
        return _constant_levy_increments(spec, np.full(y.shape, dt), rng)
    if isinstance(spec, Scaled) and isinstance(spec.inner, ConstantLevy):
        times = np.maximum(np.asarray(spec.a(y), dtype=float), 0.0) * dt
        return _constant_levy_increments(spec.inner, times, rng)
    raise SamplingLawError(f"no frozen-coefficient sampling law for {type(spec).__name__}")


def _constant_levy_increments(spec: ConstantLevy, times: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    if spec.psi == "gaussian":
        return np.sqrt(times) * rng.standard_normal(times.shape)
    if spec.psi == "cauchy":
        return times * rng.standard_cauchy(times.shape)
    if spec.psi == "stable":
        return times ** (1.0 / spec.alpha) * sample_standard_stable(spec.alpha, times.shape, rng)
    if spec.psi == "zero":
        return np.zeros(times.shape)
    raise SamplingLawError(f"no sampling law for psi form {spec.psi!r}")


def simulate_chain(spec: SymbolSpec, q0: float, t: float, n: int, rng: np.random.Generator) -> ChainPath:
    """One frozen-coefficient trajectory Y(0..n) with step t/n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if t <= 0:
        raise ValueError("t must be positive")
    dt = t / n
    positions = np.empty(n + 1)
    increments = np.empty(n)
    positions[0] = q0
    for k in range(n):
        inc = _frozen_increments(spec, np.asarray([positions[k]]), dt, rng)[0]
        increments[k] = inc
        positions[k + 1] = positions[k] + inc
    return ChainPath(positions, increments, dt)


def _shard_seeds(seed: int, n_paths: int) -> list[tuple[int, int]]:
    sizes = []
    left = n_paths
    shard = 0
    while left > 0:
        take = min(SHARD_SIZE, left)
        sizes.append((shard, take))
        left -= take
        shard += 1
    return sizes


def _run_shards(shard_fn: Callable[[int, int], np.ndarray], seed: int, n_paths: int, threads: int) -> McEstimate:
    shards = _shard_seeds(seed, n_paths)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outs = list(pool.map(lambda sh: shard_fn(*sh), shards))
    else:
        outs = [shard_fn(*sh) for sh in shards]
    values = np.concatenate(outs)  # shard order fixed => deterministic merge
    mean = float(values.mean())
    se = float(values.std(ddof=1) / math.sqrt(values.size)) if values.size > 1 else 0.0
    return McEstimate(mean, se, values.size, -1)


def _check_paths(n_paths: int) -> None:
    if n_paths < 100:
        raise ValueError("n_paths must be >= 100")


def expectation_estimate(
    spec: SymbolSpec,
    q0: float,
    t: float,
    n: int,
    f: Callable[[np.ndarray], np.ndarray],
    n_paths: int,
    seed: int,
    threads: int = 1,
) -> McEstimate:
    """Monte Carlo estimate of E^{q0}[f(Y(n))] for the frozen-coefficient chain."""
    _check_paths(n_paths)
    dt = t / n

    def shard(idx: int, size: int) -> np.ndarray:
        rng = np.random.default_rng([seed, idx])
        y = np.full(size, float(q0))
        for _ in range(n):
            y = y + _frozen_increments(spec, y, dt, rng)
        return np.asarray(f(y), dtype=float)

    est = _run_shards(shard, seed, n_paths, threads)
    return McEstimate(est.mean, est.std_error, est.n_paths, n)


def girsanov_estimate(
    q0: float,
    t: float,
    n: int,
    f: Callable[[np.ndarray], np.ndarray],
    v: Callable[[np.ndarray], np.ndarray] | None,
    b: Callable[[np.ndarray], np.ndarray] | None,
    n_paths: int,
    seed: int,
    threads: int = 1,
) -> McEstimate:
    """Feynman-Kac/Girsanov-weighted estimate over Brownian chains (symbol |p|^2/2).

    Per-path weight: exp(sum V(Y_k) dt) * exp(sum b(Y_k) dY_k - sum b(Y_k)^2 dt / 2).
    """
    _check_paths(n_paths)
    dt = t / n

    def shard(idx: int, size: int) -> np.ndarray:
        rng = np.random.default_rng([seed, idx])
        y = np.full(size, float(q0))
        log_w = np.zeros(size)
        for _ in range(n):
            dy = math.sqrt(dt) * rng.standard_normal(size)
            if v is not None:
                log_w += dt * np.asarray(v(y), dtype=float)
            if b is not None:
                bv = np.asarray(b(y), dtype=float)
                log_w += bv * dy - 0.5 * dt * bv * bv
            y = y + dy
        return np.exp(log_w) * np.asarray(f(y), dtype=float)

    est = _run_shards(shard, seed, n_paths, threads)
    return McEstimate(est.mean, est.std_error, est.n_paths, n)


def write_mc_csv(rows, path, config_hash: str | None = None) -> None:
    """rows: iterable of (label, McEstimate, seed)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if config_hash:
            fh.write(f"# config_hash={config_hash}\n")
        fh.write("label,mean,std_error,n_paths,n_steps,seed\n")
        for label, est, seed in rows:
            fh.write(f"{label},{est.mean:.17g},{est.std_error:.17g},{est.n_paths},{est.n_steps},{seed}\n")
