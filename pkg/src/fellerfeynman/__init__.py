"""Numerical Feynman formulas for Feller semigroups.

Approximates semigroups T_t = lim_n [F(t/n)]^n through phase-space
(pseudo-differential) and configuration-space (kernel) step operators, their
multiplicative/gradient/Schroedinger perturbations, and cross-validates the
grid results against frozen-coefficient Markov-chain Monte Carlo estimates.
"""

from .grid import Grid1D, GridFunction, forward_fourier, hamiltonian_step, inverse_fourier
from .kernels import TransitionKernel, cauchy_density, gaussian_density, sample_increment, stable_density
from .montecarlo import ChainPath, McEstimate, expectation_estimate, girsanov_estimate, simulate_chain
from .steps import (
    BlowUpError,
    CompositeStep,
    DriftStep,
    HamiltonianStep,
    LagrangianStep,
    PotentialStep,
    StepOperator,
    apply,
    convergence_study,
    drift_step,
    iterate,
    lagrangian_step,
    potential_step,
)
from .symbols import (
    CoefficientFn,
    ConstantLevy,
    FractionalPower,
    Relativistic,
    Scaled,
    SymbolSpec,
    check_growth_bound,
    check_negative_definite,
    eval_symbol,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
