"""Step operators F(t), their composition, and the Chernoff iteration [F(t/n)]^n.

Composition order follows the perturbation corollaries: factors are listed
left-to-right with the rightmost acting first, so the canonical composite
[potential, drift, hamiltonian] applies the pseudo-differential step before
drift before multiplication by e^{tV}.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .grid import Grid1D, GridFunction, hamiltonian_step_fn
from .kernels import TransitionKernel
from .symbols import CoefficientFn, SymbolSpec

Applier = Callable[[np.ndarray], np.ndarray]


class BlowUpError(RuntimeError):
    """Intermediate sup-norm exceeded the Chernoff growth bound e^{at}."""


class StepOperator:
    """One-parameter operator family with F(0) = Id and growth ||F(t)|| <= e^{at}."""

    def growth_rate(self) -> float:
        return 0.0

    def prepare(self, t: float, grid: Grid1D) -> Applier:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class HamiltonianStep(StepOperator):
    spec: SymbolSpec

    def prepare(self, t, grid):
        return hamiltonian_step_fn(self.spec, t, grid)


@dataclass(frozen=True, eq=False)
class LagrangianStep(StepOperator):
    a: CoefficientFn
    kernel: TransitionKernel

    def prepare(self, t, grid):
        if t == 0:
            return lambda v: v
        if t < 0:
            raise ValueError("t must be positive")
        self.a.require_positive("time-rescaling coefficient a")
        q = grid.nodes
        w = np.full(grid.n, grid.dq)
        w[0] *= 0.5
        w[-1] *= 0.5
        times = np.asarray(self.a(q), dtype=float) * t
        # row j integrates p_{a(q_j) t}(q_j - y) phi(y) dy by trapezoid
        k = self.kernel.density(times[:, None], q[:, None] - q[None, :]) * w[None, :]
        # Quadrature can overshoot unit mass when the kernel is narrower than
        # the grid spacing; cap each row at probability one so the step stays
        # sub-Markovian (rows below one are genuine tail truncation, kept as is).
        row_mass = k.sum(axis=1)
        k *= np.where(row_mass > 1.0, 1.0 / row_mass, 1.0)[:, None]
        return lambda v: k @ v


@dataclass(frozen=True, eq=False)
class PotentialStep(StepOperator):
    v: CoefficientFn

    def growth_rate(self):
        return max(self.v.c_hi, 0.0)

    def prepare(self, t, grid):
        if t < 0:
            raise ValueError("t must be nonnegative")
        mult = np.exp(t * np.asarray(self.v(grid.nodes), dtype=float))
        return lambda vals: mult * vals


@dataclass(frozen=True, eq=False)
class DriftStep(StepOperator):
    b: CoefficientFn

    def prepare(self, t, grid):
        if t < 0:
            raise ValueError("t must be nonnegative")
        sup_b = max(abs(self.b.c_lo), abs(self.b.c_hi))
        if t * sup_b >= grid.half_width / 4.0:
            raise ValueError(f"drift displacement t*sup|b|={t * sup_b:.4g} leaves the padded domain")
        q = grid.nodes
        # Clamp targets to the sampled range: with t*sup|b| < L/4 only nodes in
        # the outer padding (where data is expected to vanish) are affected.
        targets = np.clip(q + t * np.asarray(self.b(q), dtype=float), q[0], q[-1])

        def run(vals):
            out = CubicSpline(q, vals)(targets)
            # Cubic interpolation can undershoot a nonnegative input by a tiny
            # amount; clamp so the step stays positivity preserving.
            v = np.asarray(vals)
            if np.iscomplexobj(v):
                if not v.imag.any() and v.real.min() >= 0.0:
                    out = np.maximum(out.real, 0.0).astype(complex)
            elif v.min() >= 0.0:
                out = np.maximum(out, 0.0)
            return out

        return run


@dataclass(frozen=True, eq=False)
class CompositeStep(StepOperator):
    factors: tuple[StepOperator, ...]

    def __init__(self, factors: Sequence[StepOperator]):
        object.__setattr__(self, "factors", tuple(factors))

    def growth_rate(self):
        return sum(f.growth_rate() for f in self.factors)

    def prepare(self, t, grid):
        prepared = [f.prepare(t, grid) for f in self.factors]

        def run(vals):
            for fn in reversed(prepared):
                vals = fn(vals)
            return vals

        return run


def lagrangian_step(a: CoefficientFn, kernel: TransitionKernel, t: float, phi: GridFunction) -> GridFunction:
    if t <= 0:
        raise ValueError("t must be positive")
    return apply(LagrangianStep(a, kernel), t, phi)


def potential_step(v: CoefficientFn, t: float, phi: GridFunction) -> GridFunction:
    return apply(PotentialStep(v), t, phi)


def drift_step(b: CoefficientFn, t: float, phi: GridFunction) -> GridFunction:
    return apply(DriftStep(b), t, phi)


def apply(op: StepOperator, t: float, phi: GridFunction) -> GridFunction:
    return GridFunction(phi.grid, np.asarray(op.prepare(t, phi.grid)(phi.values), dtype=complex))


@dataclass(frozen=True)
class IterationResult:
    final: GridFunction
    sup_norms: tuple[float, ...]


def iterate(op: StepOperator, t: float, n: int, phi: GridFunction) -> IterationResult:
    """Chernoff iterate [F(t/n)]^n phi, guarding against numerical blow-up."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if t <= 0:
        raise ValueError("t must be positive")
    step = op.prepare(t / n, phi.grid)
    bound = np.exp(op.growth_rate() * t) * phi.sup_norm * (1.0 + 1e-3)
    vals = phi.values
    norms = []
    for _ in range(n):
        vals = np.asarray(step(vals), dtype=complex)
        sup = float(np.max(np.abs(vals)))
        norms.append(sup)
        if sup > bound:
            raise BlowUpError(f"sup-norm {sup:.6g} exceeded growth bound {bound:.6g}")
    return IterationResult(GridFunction(phi.grid, vals), tuple(norms))


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    sup_error: float
    l2_error: float
    observed_order: float  # log2(err(n)/err(next n)) per doubling; NaN on last row
    wall_ms: float


def convergence_study(
    op: StepOperator,
    t: float,
    n_list: Sequence[int],
    reference,
    phi: GridFunction,
) -> list[ConvergenceRow]:
    """Errors of [F(t/n)]^n phi against a reference, on the inner half-grid.

    reference is either an exact GridFunction or the string "self", meaning
    the largest-n iterate serves as reference.
    """
    ns = list(n_list)
    if any(n < 1 for n in ns) or ns != sorted(ns):
        raise ValueError("n_list must be ascending positive integers")
    mask = phi.grid.inner_mask()
    iterates: dict[int, tuple[GridFunction, float]] = {}
    for n in ns:
        t0 = time.perf_counter()
        res = iterate(op, t, n, phi)
        iterates[n] = (res.final, 1e3 * (time.perf_counter() - t0))
    if isinstance(reference, str):
        if reference != "self":
            raise ValueError("reference must be a GridFunction or 'self'")
        ref_vals = iterates[ns[-1]][0].values
    else:
        ref_vals = reference.values
    rows = []
    for n in ns:
        diff = (iterates[n][0].values - ref_vals)[mask]
        sup = float(np.max(np.abs(diff)))
        l2 = float(np.sqrt(phi.grid.dq * np.sum(np.abs(diff) ** 2)))
        rows.append([n, sup, l2, iterates[n][1]])
    out = []
    for i, (n, sup, l2, ms) in enumerate(rows):
        if i + 1 < len(rows) and rows[i + 1][1] > 0 and sup > 0:
            order = float(np.log(sup / rows[i + 1][1]) / np.log(rows[i + 1][0] / n))
        else:
            order = float("nan")
        out.append(ConvergenceRow(n, sup, l2, order, ms))
    return out


def write_convergence_csv(rows: Sequence[ConvergenceRow], path, config_hash: str | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if config_hash:
            fh.write(f"# config_hash={config_hash}\n")
        fh.write("n,sup_error,l2_error,observed_order,wall_ms\n")
        for r in rows:
            order = "" if np.isnan(r.observed_order) else f"{r.observed_order:.6g}"
            fh.write(f"{r.n},{r.sup_error:.17g},{r.l2_error:.17g},{order},{r.wall_ms:.3f}\n")
