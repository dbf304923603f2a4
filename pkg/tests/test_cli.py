import json
from pathlib import Path

import numpy as np
import pytest

from fellerfeynman.cli import EXIT_BLOWUP, EXIT_CONFIG, EXIT_OK, EXIT_VALIDATION, main
from fellerfeynman.grid import read_grid_csv

PRESETS = Path(__file__).resolve().parent.parent / "presets"


def base_config(**overrides):
    cfg = {
        "grid": {"L": 20.0, "N": 1024},
        "symbol": {"variant": "constant_levy", "psi": "gaussian"},
        "steps": [{"type": "hamiltonian"}],
        "initial": {"family": "gaussian", "center": 0.0, "width": 1.0},
        "time": 1.0,
        "n": 16,
    }
    cfg.update(overrides)
    return cfg


def write_config(tmp_path, cfg, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


class TestEvolve:
    def test_heat_preset_structure(self, tmp_path):
        out = tmp_path / "out"
        rc = main(["evolve", "--config", str(PRESETS / "heat.json"), "--out", str(out)])
        assert rc == EXIT_OK
        q, vals = read_grid_csv(out / "state.csv")
        assert q.size == 1024
        meta = json.loads((out / "metadata.json").read_text())
        assert meta["config"]["grid"]["N"] == 1024
        assert len(meta["sup_norm_trace"]) == 64
        assert (out / "state.csv").read_text().startswith("# config_hash=")

    def test_invalid_grid_names_field(self, tmp_path, capsys):
        cfg = base_config(grid={"L": 20.0, "N": 1000})
        rc = main(["evolve", "--config", write_config(tmp_path, cfg), "--out", str(tmp_path / "o")])
        assert rc == EXIT_CONFIG
        assert "grid.N" in capsys.readouterr().err

    def test_constant_potential_factorization(self, tmp_path):
        with_v = base_config(
            steps=[{"type": "potential", "V": {"kind": "constant", "value": -1.0}}, {"type": "hamiltonian"}]
        )
        without = base_config()
        out_v, out_0 = tmp_path / "v", tmp_path / "novg"
        assert main(["evolve", "--config", write_config(tmp_path, with_v, "a.json"), "--out", str(out_v)]) == EXIT_OK
        assert main(["evolve", "--config", write_config(tmp_path, without, "b.json"), "--out", str(out_0)]) == EXIT_OK
        _, va = read_grid_csv(out_v / "state.csv")
        _, vb = read_grid_csv(out_0 / "state.csv")
        assert np.max(np.abs(va - np.exp(-1.0) * vb)) < 1e-12

    def test_determinism(self, tmp_path):
        cfg = write_config(tmp_path, base_config())
        a, b = tmp_path / "r1", tmp_path / "r2"
        main(["evolve", "--config", cfg, "--out", str(a)])
        main(["evolve", "--config", cfg, "--out", str(b)])
        assert (a / "state.csv").read_bytes() == (b / "state.csv").read_bytes()

    def test_blow_up_exit_code(self, tmp_path, capsys):
        cfg = base_config(symbol={"variant": "constant_levy", "psi": "power", "alpha": 2.0, "scale": -0.5})
        rc = main(["evolve", "--config", write_config(tmp_path, cfg), "--out", str(tmp_path / "o")])
        assert rc == EXIT_BLOWUP

    def test_missing_n_is_config_error(self, tmp_path):
        cfg = base_config()
        del cfg["n"]
        rc = main(["evolve", "--config", write_config(tmp_path, cfg), "--out", str(tmp_path / "o")])
        assert rc == EXIT_CONFIG

    def test_unreadable_config(self, tmp_path):
        assert main(["evolve", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path / "o")]) == EXIT_CONFIG


class TestConverge:
    def test_constant_coefficient_errors_tiny(self, tmp_path):
        cfg = base_config(n_list=[1, 2, 4, 8])
        out = tmp_path / "o"
        assert main(["converge", "--config", write_config(tmp_path, cfg), "--out", str(out)]) == EXIT_OK
        rows = [l.split(",") for l in (out / "convergence.csv").read_text().splitlines()[2:]]
        assert all(float(r[1]) < 1e-10 for r in rows)

    def test_variable_a_monotone_decrease(self, tmp_path):
        out = tmp_path / "o"
        rc = main(["converge", "--config", str(PRESETS / "variable_diffusion.json"), "--out", str(out)])
        assert rc == EXIT_OK
        rows = [l.split(",") for l in (out / "convergence.csv").read_text().splitlines()[2:]]
        sups = [float(r[1]) for r in rows[:-1]]  # last row is the self-reference
        assert all(a > b for a, b in zip(sups, sups[1:]))

    def test_single_n(self, tmp_path):
        cfg = base_config(n_list=[4])
        out = tmp_path / "o"
        assert main(["converge", "--config", write_config(tmp_path, cfg), "--out", str(out)]) == EXIT_OK
        assert len((out / "convergence.csv").read_text().splitlines()) == 3


class TestMc:
    def test_fixed_seed_identical_files(self, tmp_path):
        cfg = base_config(
            symbol={
                "variant": "scaled",
                "a": {"kind": "sinusoidal", "base": 1.0, "amplitude": 0.5},
                "inner": {"variant": "constant_levy", "psi": "gaussian"},
            },
            mc={
                "n_paths": 2000,
                "seed": 7,
                "n": 8,
                "f": {"family": "gaussian"},
                "q0_list": [0.0, 1.0],
            },
        )
        path = write_config(tmp_path, cfg)
        a, b = tmp_path / "r1", tmp_path / "r2"
        assert main(["mc", "--config", path, "--out", str(a)]) == EXIT_OK
        assert main(["mc", "--config", path, "--out", str(b)]) == EXIT_OK
        assert (a / "mc.csv").read_bytes() == (b / "mc.csv").read_bytes()
        lines = (a / "mc.csv").read_text().splitlines()
        assert lines[2].startswith("expectation q0=0,")
        assert lines[3].startswith("expectation q0=1,")

    def test_girsanov_labels_when_weighted(self, tmp_path):
        out = tmp_path / "o"
        cfg = json.loads((PRESETS / "girsanov.json").read_text())
        cfg["mc"]["n_paths"] = 2000
        assert main(["mc", "--config", write_config(tmp_path, cfg), "--out", str(out)]) == EXIT_OK
        assert (out / "mc.csv").read_text().splitlines()[2].startswith("girsanov q0=0,")

    def test_seed_override(self, tmp_path):
        cfg = base_config(mc={"n_paths": 1000, "seed": 7, "n": 8, "f": {"family": "gaussian"}, "q0_list": [0.0]})
        path = write_config(tmp_path, cfg)
        a, b = tmp_path / "r1", tmp_path / "r2"
        main(["mc", "--config", path, "--out", str(a), "--seed", "99"])
        main(["mc", "--config", path, "--out", str(b)])
        assert (a / "mc.csv").read_bytes() != (b / "mc.csv").read_bytes()
        assert json.loads((a / "metadata.json").read_text())["seed"] == 99

    def test_too_few_paths_is_config_error(self, tmp_path):
        cfg = base_config(mc={"n_paths": 10, "seed": 0, "n": 4, "f": {"family": "gaussian"}, "q0_list": [0.0]})
        assert main(["mc", "--config", write_config(tmp_path, cfg), "--out", str(tmp_path / "o")]) == EXIT_CONFIG

    def test_mc_without_section_is_config_error(self, tmp_path):
        assert (
            main(["mc", "--config", write_config(tmp_path, base_config()), "--out", str(tmp_path / "o")])
            == EXIT_CONFIG
        )


class TestValidate:
    def test_good_symbol_passes(self, tmp_path, capsys):
        cfg = base_config(
            symbol={"variant": "fractional_power", "alpha": 1.5, "a": {"kind": "sinusoidal", "base": 1.0, "amplitude": 0.5}}
        )
        out = tmp_path / "o"
        rc = main(["validate", "--config", write_config(tmp_path, cfg), "--out", str(out)])
        assert rc == EXIT_OK
        report = json.loads((out / "validation.json").read_text())
        assert report["all_passed"] and len(report["checks"]) == 5
        assert "[PASS]" in capsys.readouterr().out

    def test_sign_flipped_symbol_fails(self, tmp_path, capsys):
        cfg = base_config(symbol={"variant": "constant_levy", "psi": "power", "alpha": 2.0, "scale": -1.0})
        out = tmp_path / "o"
        rc = main(["validate", "--config", write_config(tmp_path, cfg), "--out", str(out)])
        assert rc == EXIT_VALIDATION
        assert "[FAIL]" in capsys.readouterr().out
        report = json.loads((out / "validation.json").read_text())
        assert not report["all_passed"]


class TestPresets:
    @pytest.mark.parametrize(
        "name", ["heat", "variable_diffusion", "cauchy", "variable_cauchy", "relativistic", "schrodinger", "drift", "girsanov"]
    )
    def test_preset_parses(self, name):
        from fellerfeynman.config import ExperimentConfig

        cfg = ExperimentConfig.from_file(PRESETS / f"{name}.json")
        assert cfg.time > 0
        assert len(cfg.config_hash()) == 16

    def test_preset_evolve_runs(self, tmp_path):
        for name in ["cauchy", "relativistic", "schrodinger", "drift"]:
            out = tmp_path / name
            assert main(["evolve", "--config", str(PRESETS / f"{name}.json"), "--out", str(out)]) == EXIT_OK
