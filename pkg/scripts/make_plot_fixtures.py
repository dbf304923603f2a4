#!/usr/bin/env python3
"""Generate the CSV fixtures consumed by the plotting package's test suite.

Outputs under frontend/fixtures/:
  - synthetic_order1.csv   convergence table with err(n) = 1/n exactly
  - convergence.csv        engine-generated variable-diffusion study
  - state.csv              engine-generated evolved state (grid curve)
  - mc.csv                 Monte Carlo estimates at several start points q0,
                           matched against the same evolved state
  - mc_empty.csv           header-only file for the validation test
"""
from pathlib import Path

import numpy as np

from fellerfeynman import (
    CoefficientFn,
    ConstantLevy,
    Grid1D,
    GridFunction,
    LagrangianStep,
    Scaled,
    TransitionKernel,
    convergence_study,
    expectation_estimate,
    iterate,
)
from fellerfeynman.grid import write_grid_csv
from fellerfeynman.montecarlo import write_mc_csv
from fellerfeynman.steps import write_convergence_csv

OUT = Path(__file__).resolve().parent.parent / "frontend" / "fixtures"


def synthetic_order_one() -> None:
    ns = [4, 8, 16, 32, 64, 128]
    with open(OUT / "synthetic_order1.csv", "w", encoding="utf-8", newline="") as fh:
        fh.write("n,sup_error,l2_error,observed_order,wall_ms\n")
        for i, n in enumerate(ns):
            err = 1.0 / n
            order = "1" if i + 1 < len(ns) else ""
            fh.write(f"{n},{err:.17g},{err:.17g},{order},1.000\n")


def engine_fixtures() -> None:
    grid = Grid1D(20.0, 1024)
    phi = GridFunction.from_callable(grid, lambda q: np.exp(-(q**2) / 2))
    a = CoefficientFn.sinusoidal(1.0, 0.5)
    lag = LagrangianStep(a, TransitionKernel("gaussian"))

    rows = convergence_study(lag, 1.0, [4, 8, 16, 32, 64, 128, 256], "self", phi)
    write_convergence_csv(rows, OUT / "convergence.csv", config_hash="fixture")

    state = iterate(lag, 1.0, 64, phi).final
    write_grid_csv(state, OUT / "state.csv", config_hash="fixture")

    spec = Scaled(a, ConstantLevy("gaussian"))
    f = lambda x: np.exp(-(x**2) / 2)
    mc_rows = []
    for q0 in (-2.0, -1.0, 0.0, 1.0, 2.0):
        est = expectation_estimate(spec, q0, 1.0, 64, f, 100_000, seed=2024)
        mc_rows.append((f"expectation q0={q0:g}", est, 2024))
    write_mc_csv(mc_rows, OUT / "mc.csv", config_hash="fixture")

    (OUT / "mc_empty.csv").write_text("label,mean,std_error,n_paths,n_steps,seed\n", encoding="utf-8")


if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    synthetic_order_one()
    engine_fixtures()
    print(f"fixtures written to {OUT}")
