"""Catalog of negative-definite symbols H(q, p) and numerical validity checks.

The catalog covers state-dependent fractional powers a(q)|p|^alpha, the
relativistic symbol sqrt(|p|^alpha + m^2(q)) - m(q), constant-coefficient
characteristic exponents psi(p), and multiplicative rescalings a(q)*H(q, p).
All catalog symbols are real-valued, vanish at p = 0, and obey the quadratic
growth bound |H(q, p)| <= kappa * (1 + |p|^2).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np


class SymbolError(ValueError):
    """Raised for invalid symbol parameters."""


@dataclass(frozen=True, eq=False)
class CoefficientFn:
    """Bounded coefficient function q -> a(q) with certified bounds [c_lo, c_hi].

    Bounds are exact for constant and sinusoidal kinds and a min/max scan over
    the nodes for tabulated ones (tabulated evaluation is piecewise linear with
    constant extension, so the node scan is certified).
    """

    kind: str
    c_lo: float
    c_hi: float
    _eval: Callable[[np.ndarray], np.ndarray] = field(repr=False)

    @classmethod
    def constant(cls, value: float) -> "CoefficientFn":
        v = float(value)
        return cls("constant", v, v, lambda q: np.full_like(np.asarray(q, dtype=float), v))

    @classmethod
    def sinusoidal(cls, base: float, amplitude: float, frequency: float = 1.0) -> "CoefficientFn":
        b, a, w = float(base), float(amplitude), float(frequency)
        return cls(
            "sinusoidal",
            b - abs(a),
            b + abs(a),
            lambda q: b + a * np.sin(w * np.asarray(q, dtype=float)),
        )

    @classmethod
    def tabulated(cls, grid, values) -> "CoefficientFn":
        g = np.asarray(grid, dtype=float)
        v = np.asarray(values, dtype=float)
        if g.ndim != 1 or g.shape != v.shape or g.size < 2:
            raise SymbolError("tabulated coefficient needs matching 1-D grid/values, >= 2 nodes")
        if not np.all(np.diff(g) > 0):
            raise SymbolError("tabulated coefficient grid must be strictly increasing")
        if not np.all(np.isfinite(v)):
            raise SymbolError("tabulated coefficient values must be finite")
        return cls(
            "tabulated",
            float(v.min()),
            float(v.max()),
            lambda q: np.interp(np.asarray(q, dtype=float), g, v),
        )

    def __call__(self, q):
        out = self._eval(np.asarray(q, dtype=float))
        return out if np.ndim(q) else float(out)

    def require_positive(self, name: str = "coefficient") -> None:
        if not (0.0 < self.c_lo <= self.c_hi < np.inf):
            raise SymbolError(f"{name} must be bounded away from zero, got bounds [{self.c_lo}, {self.c_hi}]")


class SymbolSpec:
    """Base for the parametric symbol catalog; subclasses implement evaluate()."""

    q_dependent: bool = True

    def evaluate(self, q, p):
        raise NotImplementedError

    def kappa_bound(self) -> float:
        """Certified constant with sup_q |H(q,p)| <= kappa * (1 + |p|^2)."""
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class FractionalPower(SymbolSpec):
    """H(q, p) = a(q) * |p|^alpha, alpha in (0, 2]."""

    alpha: float
    a: CoefficientFn

    def __post_init__(self):
        if not 0.0 < self.alpha <= 2.0:
            raise SymbolError(f"alpha must be in (0, 2], got {self.alpha}")

    def evaluate(self, q, p):
        q = np.asarray(q, dtype=float)
        p = np.asarray(p, dtype=float)
        return self.a(q) * np.abs(p) ** self.alpha

    def kappa_bound(self):
        # |p|^alpha <= 1 + |p|^2 for alpha in (0, 2]
        return max(abs(self.a.c_lo), abs(self.a.c_hi))


@dataclass(frozen=True, eq=False)
class Relativistic(SymbolSpec):
    """H(q, p) = sqrt(|p|^alpha + m^2(q)) - m(q), alpha in (0, 2]."""

    alpha: float
    m: CoefficientFn

    def __post_init__(self):
        if not 0.0 < self.alpha <= 2.0:
            raise SymbolError(f"alpha must be in (0, 2], got {self.alpha}")
        self.m.require_positive("mass coefficient m")

    def evaluate(self, q, p):
        q = np.asarray(q, dtype=float)
        p = np.asarray(p, dtype=float)
        m = self.m(q)
        return np.sqrt(np.abs(p) ** self.alpha + m * m) - m

    def kappa_bound(self):
        # sqrt(x + m^2) - m <= sqrt(x), and |p|^{alpha/2} <= 1 + |p|^2
        return 1.0


_PSI_FORMS = ("gaussian", "cauchy", "stable", "power", "zero")


@dataclass(frozen=True, eq=False)
class ConstantLevy(SymbolSpec):
    """Constant-coefficient characteristic exponent H(q, p) = psi(p).

    Forms: "gaussian" = |p|^2/2, "cauchy" = |p|, "stable" = |p|^alpha.
    "power" (scale * |p|^alpha) and "zero" exist as validation/test hooks; a
    negative scale deliberately violates negative definiteness.
    """

    psi: str
    alpha: float = 2.0
    scale: float = 1.0
    q_dependent = False

    def __post_init__(self):
        if self.psi not in _PSI_FORMS:
            raise SymbolError(f"unknown psi form {self.psi!r}, expected one of {_PSI_FORMS}")
        if self.psi == "stable" and not 0.0 < self.alpha <= 2.0:
            raise SymbolError(f"alpha must be in (0, 2], got {self.alpha}")

    def psi_values(self, p):
        p = np.abs(np.asarray(p, dtype=float))
        if self.psi == "gaussian":
            return 0.5 * p**2
        if self.psi == "cauchy":
            return p
        if self.psi == "stable":
            return p**self.alpha
        if self.psi == "power":
            return self.scale * p**self.alpha
        return np.zeros_like(p)

    def evaluate(self, q, p):
        vals = self.psi_values(p)
        return np.broadcast_arrays(np.asarray(q, dtype=float), vals)[1]

    def kappa_bound(self):
        if self.psi == "gaussian":
            return 0.5
        if self.psi == "zero":
            return 0.0
        if self.psi == "power":
            return abs(self.scale)
        return 1.0


@dataclass(frozen=True, eq=False)
class Scaled(SymbolSpec):
    """H(q, p) = a(q) * H_inner(q, p)."""

    a: CoefficientFn
    inner: SymbolSpec

    def evaluate(self, q, p):
        q = np.asarray(q, dtype=float)
        return self.a(q) * self.inner.evaluate(q, p)

    def kappa_bound(self):
        return max(abs(self.a.c_lo), abs(self.a.c_hi)) * self.inner.kappa_bound()


def eval_symbol(spec: SymbolSpec, q: float, p: float) -> complex:
    """Evaluate H(q, p); the catalog is real-valued so the imaginary part is 0."""
    if not (np.isfinite(q) and np.isfinite(p)):
        raise SymbolError("q and p must be finite")
    return complex(spec.evaluate(q, p))


@dataclass(frozen=True)
class GrowthBoundReport:
    kappa_fit: float
    kappa_bound: float
    passed: bool
    worst_q: float
    worst_p: float


def check_growth_bound(spec: SymbolSpec, p_samples, q_samples=None, rtol: float = 1e-9) -> GrowthBoundReport:
    """Check sup_q |H(q,p)| <= kappa*(1+|p|^2) against the coefficient-derived kappa.

    kappa_fit is the largest sampled ratio |H|/(1+|p|^2); the check passes iff
    it stays below the certified bound (up to rounding slack rtol).
    """
    p = np.asarray(p_samples, dtype=float)
    if p.size == 0:
        raise SymbolError("p_samples must be nonempty")
    q = np.linspace(-25.0, 25.0, 101) if q_samples is None else np.asarray(q_samples, dtype=float)
    h = np.abs(spec.evaluate(q[:, None], p[None, :]))
    ratios = h / (1.0 + p[None, :] ** 2)
    iq, ip = np.unravel_index(int(np.argmax(ratios)), ratios.shape)
    kappa_fit = float(ratios[iq, ip])
    kappa = spec.kappa_bound()
    return GrowthBoundReport(
        kappa_fit=kappa_fit,
        kappa_bound=kappa,
        passed=bool(kappa_fit <= kappa * (1.0 + rtol) + 1e-300),
        worst_q=float(q[iq]),
        worst_p=float(p[ip]),
    )


def check_negative_definite(spec: SymbolSpec, q: float, p_points, tol_factor: float = 1e-9) -> bool:
    """Sample test of Schoenberg negative definiteness at one q.

    Forms M[j,k] = H(q,p_j) + conj(H(q,p_k)) - H(q, p_j - p_k) and accepts iff
    the smallest eigenvalue of the Hermitian part is >= -tol_factor * ||M||.
    """
    p = np.asarray(p_points, dtype=float)
    if not 2 <= p.size <= 8:
        raise SymbolError("p_points must contain between 2 and 8 values")
    hp = np.asarray(spec.evaluate(q, p), dtype=complex)
    hdiff = np.asarray(spec.evaluate(q, p[:, None] - p[None, :]), dtype=complex)
    m = hp[:, None] + np.conj(hp)[None, :] - hdiff
    m = 0.5 * (m + m.conj().T)
    eigs = np.linalg.eigvalsh(m)
    norm = float(np.max(np.abs(eigs)))
    return bool(eigs[0] >= -tol_factor * norm - 1e-300)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def validate_symbol(spec: SymbolSpec, rng: np.random.Generator | None = None) -> list[CheckResult]:
    """Run the sampling-based hypothesis checks used by the validate subcommand."""
    rng = rng if rng is not None else np.random.default_rng(0)
    results = []

    q = rng.uniform(-20, 20, size=400)
    p = rng.uniform(-30, 30, size=400)
    h = np.asarray(spec.evaluate(q, p), dtype=complex)

    bad = np.real(h) < -1e-12
    results.append(
        CheckResult(
            "nonnegative_real_part",
            bool(not bad.any()),
            "ok" if not bad.any() else f"Re H < 0 at (q,p)=({q[bad][0]:.4g},{p[bad][0]:.4g})",
        )
    )

    h_neg = np.asarray(spec.evaluate(q, -p), dtype=complex)
    sym_err = float(np.max(np.abs(h_neg - np.conj(h))))
    results.append(
        CheckResult("conjugate_symmetry", bool(sym_err <= 1e-10 * (1 + np.max(np.abs(h)))), f"max deviation {sym_err:.3g}")
    )

    h0 = np.abs(np.asarray(spec.evaluate(q, 0.0 * q), dtype=complex))
    results.append(CheckResult("vanishes_at_p0", bool(float(h0.max()) <= 1e-12), f"max |H(q,0)| = {h0.max():.3g}"))

    gb = check_growth_bound(spec, rng.uniform(-50, 50, size=200))
    results.append(
        CheckResult(
            "growth_bound",
            gb.passed,
            f"kappa_fit={gb.kappa_fit:.6g} vs bound={gb.kappa_bound:.6g}"
            + ("" if gb.passed else f", violated at (q,p)=({gb.worst_q:.4g},{gb.worst_p:.4g})"),
        )
    )

    nd_ok, nd_detail = True, "100 random draws"
    for _ in range(100):
        m = int(rng.integers(2, 9))
        qq = float(rng.uniform(-10, 10))
        pts = rng.uniform(-10, 10, size=m)
        if not check_negative_definite(spec, qq, pts):
            nd_ok = False
            nd_detail = f"failed at q={qq:.4g}, p_points={np.array2string(pts, precision=4)}"
            break
    results.append(CheckResult("negative_definite_samples", nd_ok, nd_detail))
    return results
