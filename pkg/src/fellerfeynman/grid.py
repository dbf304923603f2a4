"""Uniform 1-D grid, discrete Fourier transforms, and the phase-space step F(t).

The transform convention matches f_hat(p) = (2 pi)^{-1/2} int e^{-ipq} f(q) dq
as a Riemann sum over q_j = -L + j dq with centered frequencies
p_k = (k - N/2) dp, dp = pi / L. Computations live on the truncated interval
[-L, L]; initial data are expected to decay well inside the boundary, and the
periodic wrap-around of the discrete transform plays the role of the vanishing-
at-infinity condition. No oscillatory-integral regularization is applied; grid
truncation is the regularizer.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .symbols import ConstantLevy, SymbolSpec

_SQRT_2PI = np.sqrt(2.0 * np.pi)


@dataclass(frozen=True)
class Grid1D:
    half_width: float
    n: int

    def __post_init__(self):
        if self.half_width <= 0:
            raise ValueError("half_width must be positive")
        if self.n < 16 or self.n & (self.n - 1) != 0:
            raise ValueError(f"N must be a power of two >= 16, got {self.n}")

    @property
    def dq(self) -> float:
        return 2.0 * self.half_width / self.n

    @property
    def dp(self) -> float:
        return np.pi / self.half_width

    @property
    def nodes(self) -> np.ndarray:
        return -self.half_width + self.dq * np.arange(self.n)

    @property
    def freqs(self) -> np.ndarray:
        return self.dp * (np.arange(self.n) - self.n // 2)

    def inner_mask(self) -> np.ndarray:
        """Nodes on the inner half |q| <= L/2, where truncation pollution is excluded."""
        return np.abs(self.nodes) <= 0.5 * self.half_width


@dataclass(frozen=True, eq=False)
class GridFunction:
    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.grid.n,):
            raise ValueError(f"values shape {v.shape} does not match grid N={self.grid.n}")
        if not np.all(np.isfinite(v)):
            raise ValueError("values must be finite")
        object.__setattr__(self, "values", v)

    @classmethod
    def from_callable(cls, grid: Grid1D, fn: Callable[[np.ndarray], np.ndarray]) -> "GridFunction":
        return cls(grid, np.asarray(fn(grid.nodes), dtype=complex))

    @property
    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))


def _signs_q(n: int) -> np.ndarray:
    return np.where(np.arange(n) % 2 == 0, 1.0, -1.0)


def _signs_p(n: int) -> np.ndarray:
    return np.where((np.arange(n) - n // 2) % 2 == 0, 1.0, -1.0)


def dft_values(values: np.ndarray, grid: Grid1D) -> np.ndarray:
    """Samples of f_hat at grid.freqs: (dq / sqrt(2 pi)) sum_j e^{-i p_k q_j} f_j."""
    n = grid.n
    return (grid.dq / _SQRT_2PI) * _signs_p(n) * np.fft.fft(values * _signs_q(n))


def idft_values(values: np.ndarray, grid: Grid1D) -> np.ndarray:
    """Inverse of dft_values: (dp / sqrt(2 pi)) sum_k e^{i p_k q_j} F_k."""
    n = grid.n
    return (grid.dp / _SQRT_2PI) * n * _signs_q(n) * np.fft.ifft(values * _signs_p(n))


def forward_fourier(phi: GridFunction) -> GridFunction:
    """Discrete f_hat sampled on the frequency grid (grid.freqs)."""
    return GridFunction(phi.grid, dft_values(phi.values, phi.grid))


def inverse_fourier(phi_hat: GridFunction) -> GridFunction:
    return GridFunction(phi_hat.grid, idft_values(phi_hat.values, phi_hat.grid))


def hamiltonian_propagator(spec: SymbolSpec, t: float, grid: Grid1D) -> np.ndarray:
    """Dense matrix M with (F(t) phi)_j = (M @ f_hat)_j for q-dependent symbols.

    M[j, k] = (dp / sqrt(2 pi)) e^{i p_k q_j} e^{-t H(q_j, p_k)}; built once per
    time step so Chernoff iteration reuses it across all n applications.
    """
    q = grid.nodes
    p = grid.freqs
    h = np.asarray(spec.evaluate(q[:, None], p[None, :]), dtype=complex)
    return (grid.dp / _SQRT_2PI) * np.exp(1j * np.outer(q, p) - t * h)


def hamiltonian_step_fn(spec: SymbolSpec, t: float, grid: Grid1D) -> Callable[[np.ndarray], np.ndarray]:
    """Prepared applier values -> values for one step of duration t."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if isinstance(spec, ConstantLevy):
        mult = np.exp(-t * spec.psi_values(grid.freqs)).astype(complex)
        return lambda v: idft_values(mult * dft_values(v, grid), grid)
    m = hamiltonian_propagator(spec, t, grid)
    return lambda v: m @ dft_values(v, grid)


def hamiltonian_step(spec: SymbolSpec, t: float, phi: GridFunction) -> GridFunction:
    """Apply the pseudo-differential step with symbol e^{-t H(q,p)}."""
    return GridFunction(phi.grid, hamiltonian_step_fn(spec, t, phi.grid)(phi.values))


def write_grid_csv(phi: GridFunction, path, config_hash: str | None = None) -> None:
    """Serialize as `q,re,im` rows at 17 significant digits."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if config_hash:
            fh.write(f"# config_hash={config_hash}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["q", "re", "im"])
        for q, v in zip(phi.grid.nodes, phi.values):
            writer.writerow([f"{q:.17g}", f"{v.real:.17g}", f"{v.imag:.17g}"])


def read_grid_csv(path) -> tuple[np.ndarray, np.ndarray]:
    """Read a `q,re,im` file back as (q, complex values); skips # comments."""
    qs, vals = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if not row or row[0].startswith("#") or row[0] == "q":
                continue
            qs.append(float(row[0]))
            vals.append(complex(float(row[1]), float(row[2])))
    return np.asarray(qs), np.asarray(vals)
