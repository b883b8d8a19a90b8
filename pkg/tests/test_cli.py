import json
import os

import numpy as np

from entroverify import density, random_density
from entroverify.cli import main
from entroverify.serialization import load_channel, load_state, save_state

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def fixture(name):
    return os.path.join(FIXTURES, name)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


with open(fixture("oracle_values.json")) as fh:
    ORACLE = json.load(fh)


class TestDivergenceCommand:
    def test_equal_states_give_zero(self, capsys):
        code, out, _ = run(capsys, "divergence", "--kind", "renyi", "--alpha", "0.5",
                           "--rho", fixture("state_rho.json"), "--sigma", fixture("state_rho.json"))
        assert code == 0
        payload = json.loads(out)
        assert abs(payload["value"]) < 1e-10
        assert payload["kind"] == "renyi"

    def test_orthogonal_pure_umegaki_is_inf(self, capsys):
        code, out, _ = run(capsys, "divergence", "--kind", "umegaki",
                           "--rho", fixture("state_ket0.json"), "--sigma", fixture("state_ket1.json"))
        assert code == 0
        assert json.loads(out)["value"] == "inf"

    def test_tsallis_sandwiched_matches_oracle_fixture(self, capsys):
        code, out, _ = run(capsys, "divergence", "--kind", "tsallis-sandwiched", "--alpha", "1.5",
                           "--rho", fixture("state_rho.json"), "--sigma", fixture("state_sigma.json"))
        assert code == 0
        value = json.loads(out)["value"]
        assert abs(value - ORACLE["tsallis_sandwiched_alpha_1p5"]) < 1e-12

    def test_renyi_matches_oracle_fixture(self, capsys):
        code, out, _ = run(capsys, "divergence", "--kind", "renyi", "--alpha", "0.5",
                           "--rho", fixture("state_rho.json"), "--sigma", fixture("state_sigma.json"))
        assert abs(json.loads(out)["value"] - ORACLE["renyi_alpha_0p5"]) < 1e-12

    def test_log_base_rescales_logarithmic_kinds(self, capsys):
        _, out2, _ = run(capsys, "divergence", "--kind", "renyi", "--alpha", "0.5",
                         "--rho", fixture("state_rho.json"), "--sigma", fixture("state_sigma.json"))
        _, oute, _ = run(capsys, "divergence", "--kind", "renyi", "--alpha", "0.5",
                         "--rho", fixture("state_rho.json"), "--sigma", fixture("state_sigma.json"),
                         "--log-base", "e")
        v2, ve = json.loads(out2)["value"], json.loads(oute)["value"]
        assert abs(ve - v2 * np.log(2.0)) < 1e-12

    def test_log_base_leaves_power_form_alone(self, capsys):
        args = ("divergence", "--kind", "tsallis", "--alpha", "1.5",
                "--rho", fixture("state_rho.json"), "--sigma", fixture("state_sigma.json"))
        _, out2, _ = run(capsys, *args)
        _, oute, _ = run(capsys, *args, "--log-base", "e")
        assert json.loads(out2)["value"] == json.loads(oute)["value"]

    def test_missing_file_is_io_error(self, capsys):
        code, _, err = run(capsys, "divergence", "--kind", "renyi", "--alpha", "0.5",
                           "--rho", "no-such-file.json", "--sigma", fixture("state_rho.json"))
        assert code == 1
        assert "i/o error" in err

    def test_invalid_state_is_validation_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"dims": [2], "matrix_real": [[2.0, 0], [0, 0]],
                                   "matrix_imag": [[0, 0], [0, 0]]}))
        code, _, err = run(capsys, "divergence", "--kind", "renyi", "--alpha", "0.5",
                           "--rho", str(bad), "--sigma", fixture("state_rho.json"))
        assert code == 2
        assert "validation error" in err and "trace" in err

    def test_alpha_one_is_validation_error(self, capsys):
        code, _, err = run(capsys, "divergence", "--kind", "renyi", "--alpha", "1.0",
                           "--rho", fixture("state_rho.json"), "--sigma", fixture("state_rho.json"))
        assert code == 2
        assert "relative_entropy" in err


class TestChannelEntropyCommand:
    def test_randomizing_vn(self, capsys):
        code, out, _ = run(capsys, "channel-entropy", "--channel",
                           fixture("channel_randomizing22.json"), "--kind", "vn",
                           "--restarts", "6")
        assert code == 0
        payload = json.loads(out)
        assert abs(payload["value"] - 1.0) < 1e-9
        assert payload["converged"] is True

    def test_pure_replacer_zero(self, capsys):
        for kind, extra in (("vn", ()), ("renyi", ("--alpha", "1.5")),
                            ("tsallis", ("--alpha", "0.5"))):
            code, out, _ = run(capsys, "channel-entropy", "--channel",
                               fixture("channel_replacer_pure.json"), "--kind", kind,
                               "--restarts", "6", *extra)
            assert code == 0
            assert abs(json.loads(out)["value"]) < 1e-9

    def test_identity_vn(self, capsys):
        code, out, _ = run(capsys, "channel-entropy", "--channel",
                           fixture("channel_identity2.json"), "--kind", "vn",
                           "--restarts", "6")
        assert code == 0
        assert abs(json.loads(out)["value"] + 1.0) < 1e-6

    def test_argmin_round_trips(self, capsys, tmp_path):
        code, out, _ = run(capsys, "channel-entropy", "--channel",
                           fixture("channel_identity2.json"), "--kind", "vn",
                           "--restarts", "6")
        payload = json.loads(out)["argmin_input"]
        path = tmp_path / "argmin.json"
        path.write_text(json.dumps(payload))
        state = load_state(path)
        matrix = np.asarray(payload["matrix_real"]) + 1j * np.asarray(payload["matrix_imag"])
        assert np.abs(state.matrix - matrix).max() < 1e-12

    def test_cptp_violation_is_validation_error(self, capsys, tmp_path):
        bad = tmp_path / "bad_channel.json"
        bad.write_text(json.dumps({
            "dimIn": 2, "dimOut": 2,
            "kraus": [{"real": [[1.0, 0.0], [0.0, 0.7]], "imag": [[0, 0], [0, 0]]}],
        }))
        code, _, err = run(capsys, "channel-entropy", "--channel", str(bad), "--kind", "vn")
        assert code == 2
        assert "trace preservation" in err


class TestBoundCommand:
    def test_renyi_above_one_at_zero(self, capsys):
        code, out, _ = run(capsys, "bound", "--family", "renyi_down", "--alpha", "2",
                           "--dim", "2", "--eps", "0")
        assert code == 0
        assert json.loads(out)["value"] == 0.0

    def test_afw_at_one(self, capsys):
        code, out, _ = run(capsys, "bound", "--family", "afw", "--dim", "2", "--eps", "1",
                           "--alpha", "0")
        assert code == 0
        assert abs(json.loads(out)["value"] - 4.0) < 1e-12

    def test_tsallis_matches_frozen_oracle(self, capsys):
        code, out, _ = run(capsys, "bound", "--family", "tsallis_down", "--alpha", "0.5",
                           "--dim", "4", "--eps", "0.25")
        assert code == 0
        assert abs(json.loads(out)["value"] - 2.708203932499369) < 1e-12

    def test_range_violation(self, capsys):
        code, _, err = run(capsys, "bound", "--family", "renyi_down", "--alpha", "0.3",
                           "--dim", "2", "--eps", "0.5")
        assert code == 2
        assert "alpha" in err


class TestVerifyCommand:
    def write_config(self, tmp_path, **overrides):
        payload = {
            "theorem_ids": ["afw", "scaling_renyi"],
            "alpha_grid": [0.5, 1.5],
            "dims_grid": [[2, 2]],
            "trials": 4,
            "seed": 5,
        }
        payload.update(overrides)
        path = tmp_path / "config.json"
        path.write_text(json.dumps(payload))
        return path

    def test_small_campaign_exits_zero(self, capsys, tmp_path):
        config = self.write_config(tmp_path)
        out_dir = tmp_path / "out"
        code, out, _ = run(capsys, "verify", "--config", str(config), "--out", str(out_dir))
        assert code == 0
        assert "afw:" in out and "scaling_renyi:" in out
        assert (out_dir / "reports.csv").exists()
        assert (out_dir / "reports.jsonl").exists()
        assert (out_dir / "summary.json").exists()

    def test_alpha_one_in_config_exits_two(self, capsys, tmp_path):
        config = self.write_config(tmp_path, theorem_ids=["renyi_lt1"], alpha_grid=[0.5, 1.0])
        code, _, err = run(capsys, "verify", "--config", str(config), "--out", str(tmp_path / "o"))
        assert code == 2
        assert "alpha = 1" in err

    def test_trials_zero_gives_empty_report(self, capsys, tmp_path):
        config = self.write_config(tmp_path)
        out_dir = tmp_path / "out0"
        code, _, _ = run(capsys, "verify", "--config", str(config), "--out", str(out_dir),
                         "--trials", "0")
        assert code == 0
        lines = (out_dir / "reports.csv").read_text().splitlines()
        assert len(lines) == 1  # header only

    def test_malformed_config_exits_two(self, capsys, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        code, _, err = run(capsys, "verify", "--config", str(path), "--out", str(tmp_path / "o"))
        assert code == 2
        assert "malformed" in err

    def test_failing_trials_exit_three(self, capsys, tmp_path):
        config = self.write_config(tmp_path, theorem_ids=["eq_lower_gt1"],
                                   alpha_grid=[3.0], trials=30)
        code, out, _ = run(capsys, "verify", "--config", str(config), "--out", str(tmp_path / "o"))
        assert code == 3
        assert "fail" in out

    def test_default_shipped_config_is_valid(self):
        root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
        with open(os.path.join(root, "configs", "default.json")) as fh:
            payload = json.load(fh)
        from entroverify.harness import config_from_dict

        config = config_from_dict(payload)
        assert config.trials > 0


class TestRoundTrip:
    def test_state_written_by_cli_reloads_identically(self, tmp_path):
        rho = density(random_density(4, 4, seed=77).matrix, (2, 2))
        path = tmp_path / "state.json"
        save_state(rho, path)
        again = tmp_path / "state2.json"
        save_state(load_state(path), again)
        assert np.abs(load_state(again).matrix - rho.matrix).max() < 1e-12

    def test_channel_fixture_reloads(self):
        ch = load_channel(fixture("channel_randomizing22.json"))
        assert ch.dim_in == 2 and ch.dim_out == 2
