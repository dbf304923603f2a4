"""Transition densities p_t(x) of the constant-coefficient driving processes.

Gaussian (Brownian, cf e^{-t p^2/2}) and Cauchy (cf e^{-t|p|}) kernels are
closed-form. Symmetric stable kernels (cf e^{-t|p|^alpha}) are tabulated once
per alpha by inverting the characteristic function on a fine frequency grid;
the self-similarity p_t(x) = t^{-1/a} p_1(t^{-1/a} x) reuses a single t = 1
table. Beyond the table the convergent/asymptotic power-tail series

    p_1(x) ~ (1/pi) sum_k (-1)^{k+1} Gamma(k a + 1)/k! sin(k pi a/2) x^{-k a - 1}

takes over; the same series de-aliases the periodized FFT table, which matters
for the heavy tails at small alpha.

The Cauchy density uses the normalized isotropic form (1/pi) t/(t^2+x^2); see
README for the normalization convention and its characteristic-function check.
"""
from __future__ import annotations

import math
import os
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import gammaln, zeta

from .symbols import SymbolError

TABLE_N = 1 << 16
# enough frequency reach that e^{-p_max^alpha} < 1e-16, and at least 100 so
# the spatial spacing pi/p_max keeps cubic interpolation error below ~1e-7
P_MAX_FLOOR = 100.0
_DECAY = 16.0 * math.log(10.0)

_CACHE_ENV = "FELLER_CACHE_DIR"
_TABLES: dict[float, "StableTable"] = {}


def gaussian_density(t: float, x) -> np.ndarray:
    """Brownian transition density (2 pi t)^{-1/2} exp(-x^2 / 2t)."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("t must be positive")
    x = np.asarray(x, dtype=float)
    return np.exp(-(x**2) / (2.0 * t)) / np.sqrt(2.0 * np.pi * t)


def cauchy_density(t: float, x) -> np.ndarray:
    """Normalized 1-D Cauchy density (1/pi) t / (t^2 + x^2)."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("t must be positive")
    x = np.asarray(x, dtype=float)
    return t / (np.pi * (t * t + x * x))


def _tail_series_terms(alpha: float, max_terms: int = 80):
    """Per-term (sign, log-magnitude pieces) of the power-tail series at t=1."""
    ks = np.arange(1, max_terms + 1)
    sines = np.sin(ks * np.pi * alpha / 2.0)
    signs = np.where(ks % 2 == 1, 1.0, -1.0) * np.sign(sines)
    logc = gammaln(ks * alpha + 1.0) - gammaln(ks + 1.0) + np.log(np.abs(sines) + 1e-300) - np.log(np.pi)
    keep = np.abs(sines) > 1e-14
    return ks[keep], signs[keep], logc[keep]


def stable_tail_density(alpha: float, x, max_terms: int = 80) -> np.ndarray:
    """Power-tail series for the t=1 density, valid for x well outside the core.

    Convergent for alpha < 1; asymptotic otherwise, truncated when terms stop
    decreasing.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    ks, signs, logc = _tail_series_terms(alpha, max_terms)
    acc = np.zeros_like(x)
    prev = np.full_like(x, np.inf)
    alive = np.ones_like(x, dtype=bool)
    logx = np.log(x)
    for k, s, lc in zip(ks, signs, logc):
        mag = np.exp(lc - (k * alpha + 1.0) * logx)
        grow = mag > prev
        alive &= ~grow
        acc[alive] += s * mag[alive]
        prev = mag
        if not alive.any():
            break
    return acc


def stable_tail_mass(alpha: float, x0: float, max_terms: int = 80) -> float:
    """Integral of the tail series over [x0, inf)."""
    ks, signs, logc = _tail_series_terms(alpha, max_terms)
    total, prev = 0.0, np.inf
    for k, s, lc in zip(ks, signs, logc):
        mag = math.exp(lc - k * alpha * math.log(x0)) / (k * alpha)
        if mag > prev:
            break
        total += s * mag
        prev = mag
    return total


class StableTable:
    """Tabulated t=1 symmetric stable density for one alpha."""

    def __init__(self, alpha: float, n: int = TABLE_N):
        if not 0.0 < alpha <= 2.0:
            raise SymbolError(f"alpha must be in (0, 2], got {alpha}")
        self.alpha = float(alpha)
        self.n = int(n)
        self.p_max = max(_DECAY ** (1.0 / alpha), P_MAX_FLOOR)
        self.dx = math.pi / self.p_max
        self.x_max = self.n * self.dx / 2.0
        table = self._load_cache()
        if table is None:
            table = self._build()
            self._store_cache(table)
        self.table = table
        half = self.n // 2
        self.x_nodes = np.arange(half + 1) * self.dx
        self._spline = CubicSpline(self.x_nodes, np.concatenate([table[half:], table[:1]]))
        self.x_tab = float(self.x_nodes[-1])

    def _build(self) -> np.ndarray:
        n = self.n
        dp = 2.0 * self.p_max / n
        k = np.arange(n)
        p = (k - n // 2) * dp
        cf = np.exp(-np.abs(p) ** self.alpha)
        # p_1(x_j) = (dp / 2pi) * sum_k e^{i p_k x_j} cf_k with centered grids
        sk = np.where((k - n // 2) % 2 == 0, 1.0, -1.0)
        vals = (dp / (2.0 * np.pi)) * sk * n * np.fft.ifft(cf * sk)
        table = np.real(vals)
        table -= self._alias_correction()
        return np.maximum(table, 0.0)

    def _alias_correction(self) -> np.ndarray:
        """Periodization images sum_{m != 0} p_1(x + 2 x_max m) via Hurwitz zeta."""
        n = self.n
        x = (np.arange(n) - n // 2) * self.dx
        u = x / (2.0 * self.x_max)  # in [-1/2, 1/2)
        width = 2.0 * self.x_max
        ks, signs, logc = _tail_series_terms(self.alpha)
        out = np.zeros(n)
        prev = np.inf
        for k, s, lc in zip(ks, signs, logc):
            beta = k * self.alpha + 1.0
            coef = math.exp(lc - beta * math.log(width))
            if coef > prev:
                break
            out += s * coef * (zeta(beta, 1.0 + u) + zeta(beta, 1.0 - u))
            prev = coef
        return out

    def density(self, t, x) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if np.any(t <= 0):
            raise ValueError("t must be positive")
        scale = t ** (1.0 / self.alpha)
        z = np.abs(np.asarray(x, dtype=float)) / scale
        z, scale = np.broadcast_arrays(z, scale)
        out = np.empty_like(z)
        inside = z <= self.x_tab
        out[inside] = self._spline(z[inside])
        if (~inside).any():
            out[~inside] = stable_tail_density(self.alpha, z[~inside])
        return np.maximum(out / scale, 0.0)

    def total_mass(self) -> float:
        """Table trapezoid plus the analytic tail beyond the tabulated window."""
        core = float(np.trapezoid(self.table, dx=self.dx))
        return core + 2.0 * stable_tail_mass(self.alpha, self.x_max)

    # --- binary cache: header {alpha f64, N i64, p_max f64}, then N f64 values

    def _cache_path(self) -> Path | None:
        root = os.environ.get(_CACHE_ENV)
        if not root:
            return None
        return Path(root) / f"stable_alpha{self.alpha:.10g}_n{self.n}.bin"

    def _load_cache(self) -> np.ndarray | None:
        path = self._cache_path()
        if path is None or not path.is_file():
            return None
        raw = path.read_bytes()
        if len(raw) < 24:
            return None
        alpha, n, p_max = struct.unpack("<dqd", raw[:24])
        if n != self.n or abs(alpha - self.alpha) > 1e-12 or abs(p_max - self.p_max) > 1e-9:
            return None
        table = np.frombuffer(raw[24:], dtype="<f8")
        return table.copy() if table.size == self.n else None

    def _store_cache(self, table: np.ndarray) -> None:
        path = self._cache_path()
        if path is None:
            return
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(struct.pack("<dqd", self.alpha, self.n, self.p_max) + table.astype("<f8").tobytes())


def stable_table(alpha: float) -> StableTable:
    key = round(float(alpha), 12)
    if key not in _TABLES:
        _TABLES[key] = StableTable(alpha)
    return _TABLES[key]


def stable_density(alpha: float, t: float, x) -> np.ndarray:
    """Symmetric stable density with characteristic function e^{-t |p|^alpha}.

    Always goes through the tabulation path so the alpha = 1, 2 closed-form
    reductions remain genuine checks of the inversion machinery.
    """
    return stable_table(alpha).density(t, x)


@dataclass(frozen=True, eq=False)
class TransitionKernel:
    """Density family with sampling support; family in {gaussian, cauchy, stable}."""

    family: str
    alpha: float = 2.0

    def __post_init__(self):
        if self.family not in ("gaussian", "cauchy", "stable"):
            raise SymbolError(f"unknown kernel family {self.family!r}")
        if self.family == "stable" and not 0.0 < self.alpha <= 2.0:
            raise SymbolError(f"alpha must be in (0, 2], got {self.alpha}")

    def density(self, t, x) -> np.ndarray:
        if self.family == "gaussian":
            return gaussian_density(t, x)
        if self.family == "cauchy":
            return cauchy_density(t, x)
        return stable_density(self.alpha, t, x)

    def sample(self, t: float, size, rng: np.random.Generator) -> np.ndarray:
        if t <= 0:
            raise ValueError("t must be positive")
        if self.family == "gaussian":
            return math.sqrt(t) * rng.standard_normal(size)
        if self.family == "cauchy":
            return t * rng.standard_cauchy(size)
        return t ** (1.0 / self.alpha) * sample_standard_stable(self.alpha, size, rng)


def sample_standard_stable(alpha: float, size, rng: np.random.Generator) -> np.ndarray:
    """Chambers-Mallows-Stuck draw with characteristic function e^{-|p|^alpha}."""
    if alpha == 2.0:
        return math.sqrt(2.0) * rng.standard_normal(size)
    u = rng.uniform(-np.pi / 2.0, np.pi / 2.0, size)
    if alpha == 1.0:
        return np.tan(u)
    w = rng.standard_exponential(size)
    return (np.sin(alpha * u) / np.cos(u) ** (1.0 / alpha)) * (np.cos((1.0 - alpha) * u) / w) ** (
        (1.0 - alpha) / alpha
    )


def sample_increment(family: str, t: float, alpha: float, rng: np.random.Generator) -> float:
    """One increment of the named process over time t."""
    return float(TransitionKernel(family, alpha).sample(t, None, rng))
