import json
import math

import pytest

from magwin.cli import main

MID = math.pi / 2.0


def write_config(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def bump_dict(flux=0.3, s=0.5, center=(-3.0, MID)):
    return {"kind": "compact_bump", "p": list(center),
            "amplitude": 6.0 * flux / s**2, "support_radius": s}


class TestBounds:
    def test_zero_field_critical_length_zero(self, tmp_path):
        cfg = write_config(tmp_path, "c.json", {
            "variant": "compact", "window_l": 0.1, "field": None,
            "p_minus": [-3.0, MID], "p_plus": [3.0, MID], "R": 1.0,
        })
        assert main(["bounds", "--config", cfg, "--out", str(tmp_path)]) == 0
        payload = json.loads((tmp_path / "bounds.json").read_text())
        assert payload["report"]["critical_length"] == 0.0
        assert payload["report"]["verdict_absence"] == "not_certified"
        assert "content_hash" in payload

    def test_ab_strict_flag(self, tmp_path):
        cfg = write_config(tmp_path, "c.json", {
            "variant": "aharonov_bohm", "window_l": 1e-6,
            "field": {"kind": "aharonov_bohm", "p": [-2.0, MID], "flux": 0.5},
        })
        assert main(["bounds", "--config", cfg, "--out", str(tmp_path)]) == 0
        payload = json.loads((tmp_path / "bounds.json").read_text())
        assert payload["report"]["strict_inequality"] is True
        assert payload["report"]["critical_length"] > 0.0

    def test_compact_records_both_kappas(self, tmp_path):
        cfg = write_config(tmp_path, "c.json", {
            "variant": "compact", "window_l": 1e-5, "field": bump_dict(),
            "p_minus": [-3.0, MID], "p_plus": [3.0, MID], "R": 1.0,
        })
        assert main(["bounds", "--config", cfg, "--out", str(tmp_path)]) == 0
        payload = json.loads((tmp_path / "bounds.json").read_text())
        rep = payload["report"]
        assert rep["kappa_minus"] > 0.0 and rep["kappa_plus"] == 0.0
        assert rep["branch_minus"] in ("hardy", "geometric")
        assert (tmp_path / "flux_profiles.csv").exists()
        assert (tmp_path / "flux_profiles.png").exists()

    def test_precondition_error_exit_2(self, tmp_path):
        cfg = write_config(tmp_path, "c.json", {
            "variant": "compact", "window_l": 2.5, "field": bump_dict(),
            "p_minus": [-3.0, MID], "p_plus": [3.0, MID], "R": 1.0,
        })
        assert main(["bounds", "--config", cfg, "--out", str(tmp_path)]) == 2

    def test_missing_config_exit_2(self, tmp_path):
        assert main(["bounds", "--out", str(tmp_path)]) == 2
        assert main(["bounds", "--config", str(tmp_path / "nope.json")]) == 2


class TestSpectrum:
    def test_single_solve_outputs(self, tmp_path):
        cfg = write_config(tmp_path, "c.json", {
            "window_l": 0.5, "L": 10.0, "h": 0.1, "field": None,
            "k": 2, "keep_vectors": True,
        })
        assert main(["spectrum", "--config", cfg, "--out", str(tmp_path)]) == 0
        payload = json.loads((tmp_path / "spectrum.json").read_text())
        assert len(payload["result"]["eigenvalues"]) == 2
        assert payload["resolved_config"]["window_l"] == 0.5
        assert (tmp_path / "eigenvector0.csv").exists()
        assert (tmp_path / "eigenvector0.png").exists()

    def test_reproducible_bytes(self, tmp_path):
        cfg = write_config(tmp_path, "c.json", {
            "window_l": 0.5, "L": 10.0, "h": 0.1, "field": None, "k": 1,
        })
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert main(["spectrum", "--config", cfg, "--out", str(out1)]) == 0
        assert main(["spectrum", "--config", cfg, "--out", str(out2)]) == 0
        assert (out1 / "spectrum.json").read_bytes() == (out2 / "spectrum.json").read_bytes()

    def test_ladder_probe(self, tmp_path):
        cfg = write_config(tmp_path, "c.json", {
            "window_l": 0.5, "field": None, "k": 2,
        })
        assert main(["spectrum", "--config", cfg, "--out", str(tmp_path),
                     "--ladder", "10:0.1,20:0.1", "--seed", "1"]) == 0
        payload = json.loads((tmp_path / "spectrum.json").read_text())
        assert payload["probe"]["verdict"] in ("PRESENT", "NOT_FOUND")
        assert len(payload["probe"]["rungs"]) == 2

    def test_bad_ladder_exit_2(self, tmp_path):
        cfg = write_config(tmp_path, "c.json", {
            "window_l": 0.5, "field": None,
        })
        assert main(["spectrum", "--config", cfg, "--out", str(tmp_path),
                     "--ladder", "banana"]) == 2


class TestOnedim:
    def test_outputs(self, tmp_path):
        cfg = write_config(tmp_path, "c.json", {
            "window_l": 0.5, "rho": None, "L1": 15.0, "h": 0.025,
        })
        assert main(["onedim", "--config", cfg, "--out", str(tmp_path)]) == 0
        payload = json.loads((tmp_path / "onedim.json").read_text())
        assert payload["report"]["certified_sign"] == "negative"
        assert (tmp_path / "minimizer.csv").exists()
        assert (tmp_path / "minimizer.png").exists()

    def test_with_weight(self, tmp_path):
        cfg = write_config(tmp_path, "c.json", {
            "window_l": 1e-4,
            "rho": {"variant": "compact", "c_minus": 0.001, "p1_minus": -3.0,
                    "c_plus": 0.001, "p1_plus": 3.0},
            "L1": 30.0, "h": 0.01,
        })
        assert main(["onedim", "--config", cfg, "--out", str(tmp_path)]) == 0
        payload = json.loads((tmp_path / "onedim.json").read_text())
        assert payload["report"]["certified_sign"] == "nonnegative_within_h2"


class TestSweep:
    def test_rows_and_outputs(self, tmp_path):
        cfg = write_config(tmp_path, "c.json", {
            "window_ls": [0.5], "flux_values": [0.0, 0.2],
            "field": {"kind": "compact_bump", "p": [-3.0, MID],
                      "support_radius": 0.5},
            "p_minus": [-3.0, MID], "p_plus": [3.0, MID], "R": 1.0,
            "ladder": [[10.0, 0.1]], "k": 2,
        })
        assert main(["sweep", "--config", cfg, "--out", str(tmp_path)]) == 0
        rows = (tmp_path / "sweep.csv").read_text().splitlines()
        assert len(rows) == 3  # header + 2 rows
        assert (tmp_path / "sweep.png").exists()
        payload = json.loads((tmp_path / "sweep.json").read_text())
        assert payload["n_rows"] == 2
        assert payload["n_violations"] == 0

    def test_row_error_recorded(self, tmp_path):
        cfg = write_config(tmp_path, "c.json", {
            "window_ls": [0.5],
            "flux_values": [0.2],
            # support radius too large for the strip: row fails, sweep survives
            "field": {"kind": "compact_bump", "p": [-3.0, 0.4],
                      "support_radius": 0.5},
            "ladder": [[10.0, 0.1]], "k": 1,
        })
        assert main(["sweep", "--config", cfg, "--out", str(tmp_path)]) == 0
        body = (tmp_path / "sweep.csv").read_text()
        assert "ERROR" in body


class TestVerify:
    def test_fast_level(self, tmp_path):
        assert main(["verify", "--level", "fast", "--out", str(tmp_path)]) == 0
        payload = json.loads((tmp_path / "verify.json").read_text())
        assert payload["passed"] is True
        assert len(payload["checks"]) == 3
