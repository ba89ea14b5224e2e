import json

import numpy as np
import pytest

from fiberquant.cli import (
    EXIT_INVALID,
    EXIT_OK,
    EXIT_USAGE,
    run_command,
)
from fiberquant.errors import ParseError, ValidationError
from fiberquant.scenario import load_scenario, validate_scenario_dict


@pytest.fixture()
def monopole_config(tmp_path):
    cfg = tmp_path / "monopole.json"
    cfg.write_text(json.dumps({
        "orbit": {"two_j": 2},
        "model": {"kind": "monopole", "strength": 1},
    }))
    return str(cfg)


@pytest.fixture()
def trivial_config(tmp_path):
    cfg = tmp_path / "trivial.json"
    cfg.write_text(json.dumps({
        "orbit": {"two_j": 1},
        "model": {"kind": "trivial"},
    }))
    return str(cfg)


class TestScenarioLoading:
    def test_minimal_valid(self):
        sc = validate_scenario_dict({"orbit": {"two_j": 1}, "model": {"kind": "trivial"}})
        assert sc.two_j == 1 and sc.model_kind == "trivial"
        sc.build_model()  # runs the construction-time checks

    def test_negative_spin_rejected(self):
        with pytest.raises(ValidationError):
            validate_scenario_dict({"orbit": {"two_j": -1}, "model": {"kind": "trivial"}})

    def test_unknown_model_rejected(self):
        with pytest.raises(ValidationError):
            validate_scenario_dict({"orbit": {"two_j": 1}, "model": {"kind": "wormhole"}})

    def test_bad_tolerance_rejected(self):
        with pytest.raises(ValidationError):
            validate_scenario_dict({"orbit": {"two_j": 1}, "model": {"kind": "trivial"},
                                    "tolerances": {"gram": -1.0}})

    def test_monopole_defaults_carry_paths(self, monopole_config):
        sc = load_scenario(monopole_config)
        assert {"lat30", "lat60", "lat90", "lat120", "meridian"} <= set(sc.path_specs)
        echo = sc.echo()
        assert echo["orbit"]["two_j"] == 2
        assert echo["model"]["kind"] == "monopole"

    def test_parse_error_carries_line(self, tmp_path):
        bad = tmp_path / "broken.json"
        bad.write_text('{"orbit": {"two_j": 1},]')
        with pytest.raises(ParseError) as err:
            load_scenario(str(bad))
        assert "line" in str(err.value)

    def test_config_dir_env(self, tmp_path, monkeypatch, monopole_config):
        import shutil

        cfg_dir = tmp_path / "cfgs"
        cfg_dir.mkdir()
        shutil.copy(monopole_config, cfg_dir / "m.json")
        monkeypatch.setenv("FIBERQUANT_CONFIG_DIR", str(cfg_dir))
        sc = load_scenario("m.json")
        assert sc.model_kind == "monopole"

    def test_missing_file(self):
        with pytest.raises(ParseError):
            load_scenario("/nonexistent/path.json")


class TestCommands:
    def test_prequant_diagonal(self):
        code, out = run_command(["prequant", "--spin", "1", "--hamiltonian", "0,0,1"])
        assert code == EXIT_OK
        doc = json.loads(out)
        matrix = np.array([[complex(re, im) for re, im in row] for row in doc["payload"]["matrix"]])
        assert np.linalg.norm(matrix - np.diag([0.5, -0.5]), 2) < 1e-10
        assert doc["conventions"]["s_dirac"] == -1

    def test_gram_passes(self):
        code, out = run_command(["gram", "--spin", "4"])
        assert code == EXIT_OK
        doc = json.loads(out)
        assert doc["payload"]["pass"] is True
        assert doc["payload"]["closed_form_relative_error"] <= doc["payload"]["tolerance"]

    def test_transition_diagonal_phases(self):
        code, out = run_command(["transition", "--spin", "2", "--axis", "0,0,1", "--angle", "0.5"])
        assert code == EXIT_OK
        doc = json.loads(out)
        matrix = np.array([[complex(re, im) for re, im in row] for row in doc["payload"]["matrix"]])
        # one-parameter subgroup through tau_3: phases e^{-i m t}
        expected = np.diag(np.exp(-1j * np.array([1.0, 0.0, -1.0]) * 0.5))
        assert np.linalg.norm(matrix - expected, 2) < 1e-10

    def test_connection_sources_agree(self, monopole_config):
        outs = {}
        for source in ("rep", "quad"):
            code, out = run_command(["connection", "--config", monopole_config,
                                     "--point", "0.4,0.1;0.0,0.0", "--tangent", "0.3,-0.2",
                                     "--chart", "north", "--source", source])
            assert code == EXIT_OK
            doc = json.loads(out)
            outs[source] = np.array([[complex(re, im) for re, im in row]
                                     for row in doc["payload"]["matrix"]])
        assert np.linalg.norm(outs["rep"] - outs["quad"], 2) < 1e-8

    def test_wilson_latitude_phases(self, monopole_config):
        code, out = run_command(["wilson", "--config", monopole_config,
                                 "--path", "lat60", "--steps", "3000"])
        assert code == EXIT_OK
        doc = json.loads(out)
        phases = [complex(re, im) for re, im in doc["payload"]["diagonal_phases"]]
        solid = 2 * np.pi * (1 - np.cos(np.pi / 3))
        expected = np.exp(-1j * np.array([1.0, 0.0, -1.0]) * solid)
        assert np.max(np.abs(np.array(phases) - expected)) < 1e-6

    def test_transport_reports_unitarity(self, monopole_config):
        code, out = run_command(["transport", "--config", monopole_config,
                                 "--path", "lat90", "--steps", "1000"])
        assert code == EXIT_OK
        doc = json.loads(out)
        assert doc["payload"]["unitarity_deviation"] <= 1e-8
        assert doc["payload"]["alpha_phase"] == 0

    def test_section_residual(self, trivial_config):
        code, out = run_command(["section", "--config", trivial_config])
        assert code == EXIT_OK
        doc = json.loads(out)
        assert doc["payload"]["residual"] == 0

    def test_verify_fiber_suite(self):
        code, out = run_command(["verify", "fiber", "--spin", "1"])
        assert code == EXIT_OK
        doc = json.loads(out)
        assert doc["payload"]["all_pass"] is True
        assert all("tolerance" in row for row in doc["payload"]["checks"])

    def test_verify_all_trivial(self, trivial_config):
        code, out = run_command(["verify", "all", "--config", trivial_config])
        assert code == EXIT_OK
        doc = json.loads(out)
        assert doc["payload"]["all_pass"] is True


class TestExitCodes:
    def test_unknown_subcommand(self):
        code, out = run_command(["frobnicate"])
        assert code == EXIT_USAGE
        assert "usage" in out

    def test_empty_invocation(self):
        code, _ = run_command([])
        assert code == EXIT_USAGE

    def test_validation_error(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"orbit": {"two_j": -1}, "model": {"kind": "trivial"}}))
        code, out = run_command(["gram", "--config", str(bad)])
        assert code == EXIT_INVALID
        assert "two_j" in out

    def test_missing_required_flag(self):
        code, _ = run_command(["prequant", "--spin", "1"])
        assert code == EXIT_INVALID

    def test_table_output(self, trivial_config):
        code, out = run_command(["verify", "orbit", "--config", trivial_config,
                                 "--output", "table"])
        assert code == EXIT_OK
        assert "pass" in out and "check" in out


class TestDeterminism:
    def test_byte_identical_documents(self, monopole_config):
        runs = [run_command(["wilson", "--config", monopole_config, "--path", "lat60",
                             "--steps", "1000"]) for _ in range(2)]
        assert runs[0] == runs[1]

    def test_verify_deterministic(self):
        runs = [run_command(["verify", "fiber", "--spin", "1"]) for _ in range(2)]
        assert runs[0] == runs[1]

    def test_float_formatting_17_digits(self):
        from fiberquant.cli import _serialize

        assert _serialize(1.0 / 3.0) == format(1.0 / 3.0, ".17g")
        blob = _serialize({"b": [1.5, 2], "a": True, "c": None})
        assert blob.index('"a"') < blob.index('"b"') < blob.index('"c"')
