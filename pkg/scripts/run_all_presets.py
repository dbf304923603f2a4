#!/usr/bin/env python3
"""Run every shipped preset end to end and drop results under results/.

Evolve runs for all presets; converge and mc runs where the preset defines
n_list / mc sections. Exits nonzero if any subcommand fails.
"""
import json
import sys
from pathlib import Path

from fellerfeynman.cli import main
from fellerfeynman.config import ExperimentConfig

ROOT = Path(__file__).resolve().parent.parent
PRESETS = sorted((ROOT / "presets").glob("*.json"))


def run() -> int:
    worst = 0
    for preset in PRESETS:
        cfg = ExperimentConfig.from_dict(json.loads(preset.read_text()))
        out = ROOT / cfg.output
        jobs = []
        if cfg.n is not None:
            jobs.append("evolve")
        if cfg.n_list:
            jobs.append("converge")
        if cfg.mc is not None:
            jobs.append("mc")
        if cfg.symbol is not None:
            jobs.append("validate")
        for job in jobs:
            print(f"== {preset.stem}: {job}")
            rc = main([job, "--config", str(preset), "--out", str(out)])
            if rc != 0:
                print(f"!! {preset.stem} {job} exited {rc}", file=sys.stderr)
                worst = max(worst, rc)
    return worst


if __name__ == "__main__":
    sys.exit(run())
