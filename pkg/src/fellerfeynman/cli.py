"""Command-line harness: evolve / converge / mc / validate.

Exit codes: 0 success, 2 config error, 3 numerical blow-up, 4 validation
failure. Every emitted file embeds the config hash (CSV files as a leading
`# config_hash=` comment, JSON files as a top-level field).
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .config import ConfigError, ExperimentConfig
from .grid import write_grid_csv
from .montecarlo import SamplingLawError, expectation_estimate, girsanov_estimate, write_mc_csv
from .steps import BlowUpError, convergence_study, iterate, write_convergence_csv
from .symbols import validate_symbol

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BLOWUP = 3
EXIT_VALIDATION = 4


def _write_metadata(out_dir: Path, cfg: ExperimentConfig, wall_ms: float, extra: dict) -> None:
    meta = {
        "config_hash": cfg.config_hash(),
        "config": cfg.raw,
        "wall_ms": wall_ms,
        **extra,
    }
    (out_dir / "metadata.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def run_evolve(cfg: ExperimentConfig, out_dir: Path) -> int:
    if cfg.n is None:
        raise ConfigError("n", "evolve requires a single n")
    phi = cfg.initial_state()
    t0 = time.perf_counter()
    result = iterate(cfg.step, cfg.time, cfg.n, phi)
    wall = 1e3 * (time.perf_counter() - t0)
    write_grid_csv(result.final, out_dir / "state.csv", cfg.config_hash())
    _write_metadata(out_dir, cfg, wall, {"sup_norm_trace": list(result.sup_norms)})
    print(f"evolve: n={cfg.n} t={cfg.time} -> {out_dir / 'state.csv'}")
    return EXIT_OK


def run_converge(cfg: ExperimentConfig, out_dir: Path) -> int:
    if not cfg.n_list:
        raise ConfigError("n_list", "converge requires n_list")
    phi = cfg.initial_state()
    t0 = time.perf_counter()
    rows = convergence_study(cfg.step, cfg.time, cfg.n_list, "self", phi)
    wall = 1e3 * (time.perf_counter() - t0)
    write_convergence_csv(rows, out_dir / "convergence.csv", cfg.config_hash())
    _write_metadata(out_dir, cfg, wall, {"n_list": cfg.n_list})
    print(f"converge: {len(rows)} rows -> {out_dir / 'convergence.csv'}")
    return EXIT_OK


def run_mc(cfg: ExperimentConfig, out_dir: Path, seed_override: int | None, threads: int) -> int:
    if cfg.mc is None:
        raise ConfigError("mc", "mc subcommand requires an mc section")
    mc = cfg.mc
    seed = mc.seed if seed_override is None else seed_override
    rows = []
    t0 = time.perf_counter()
    for q0 in mc.q0_list:
        if mc.v is not None or mc.b is not None:
            est = girsanov_estimate(q0, cfg.time, mc.n, mc.f, mc.v, mc.b, mc.n_paths, seed, threads)
            label = f"girsanov q0={q0:g}"
        else:
            if cfg.symbol is None:
                raise ConfigError("symbol", "mc expectation requires a top-level symbol")
            est = expectation_estimate(cfg.symbol, q0, cfg.time, mc.n, mc.f, mc.n_paths, seed, threads)
            label = f"expectation q0={q0:g}"
        rows.append((label, est, seed))
    wall = 1e3 * (time.perf_counter() - t0)
    write_mc_csv(rows, out_dir / "mc.csv", cfg.config_hash())
    _write_metadata(out_dir, cfg, wall, {"seed": seed})
    print(f"mc: {len(rows)} estimates -> {out_dir / 'mc.csv'}")
    return EXIT_OK


def run_validate(cfg: ExperimentConfig, out_dir: Path) -> int:
    if cfg.symbol is None:
        raise ConfigError("symbol", "validate requires a top-level symbol")
    checks = validate_symbol(cfg.symbol, np.random.default_rng(0))
    report = {
        "config_hash": cfg.config_hash(),
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks],
        "all_passed": all(c.passed for c in checks),
    }
    (out_dir / "validation.json").write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    for c in checks:
        print(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.detail}")
    return EXIT_OK if report["all_passed"] else EXIT_VALIDATION


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="fellerfeynman", description="Feller-semigroup Chernoff iteration engine")
    parser.add_argument("command", choices=["evolve", "converge", "mc", "validate"])
    parser.add_argument("--config", required=True, help="path to a JSON experiment config")
    parser.add_argument("--out", default=None, help="output directory (default: config's output field)")
    parser.add_argument("--threads", type=int, default=1, help="worker cap for Monte Carlo shards")
    parser.add_argument("--seed", type=int, default=None, help="override the Monte Carlo seed")
    args = parser.parse_args(argv)

    try:
        cfg = ExperimentConfig.from_file(args.config)
        out_dir = Path(args.out if args.out is not None else cfg.output)
        out_dir.mkdir(parents=True, exist_ok=True)
        if args.command == "evolve":
            return run_evolve(cfg, out_dir)
        if args.command == "converge":
            return run_converge(cfg, out_dir)
        if args.command == "mc":
            return run_mc(cfg, out_dir, args.seed, max(1, args.threads))
        return run_validate(cfg, out_dir)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SamplingLawError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BlowUpError as exc:
        print(f"numerical blow-up: {exc}", file=sys.stderr)
        return EXIT_BLOWUP


if __name__ == "__main__":
    sys.exit(main())
