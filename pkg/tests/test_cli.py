import json
import math

import numpy as np
import pytest

from locc_lab import cli
from locc_lab.qmat import schmidt_ket, singlet_ket
from locc_lab.report import Check, format_float, render_csv, render_json


def run(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestStateParser:
    def test_named_states(self):
        state = cli.state_parser("singlet")
        np.testing.assert_allclose(state.ket, singlet_ket(), atol=1e-12)
        assert cli.state_parser("maxmix").matrix.dims == (2, 2)

    def test_schmidt_family(self):
        state = cli.state_parser("schmidt(a2=0.25)")
        np.testing.assert_allclose(state.ket, schmidt_ket(0.25), atol=1e-12)
        assert abs(state.ket[0] - 0.5) < 1e-12
        assert abs(state.ket[3] - math.sqrt(3) / 2) < 1e-12

    def test_unknown_name_reports_position(self):
        with pytest.raises(cli.StateSpecError):
            cli.state_parser("werner")

    def test_bad_number_reports_position(self):
        with pytest.raises(cli.StateSpecError) as info:
            cli.state_parser("schmidt(a2=x)")
        assert "position" in str(info.value)

    def test_missing_paren(self):
        with pytest.raises(cli.StateSpecError):
            cli.state_parser("schmidt(a2=0.3")

    def test_file_matrix(self, tmp_path):
        path = tmp_path / "state.json"
        matrix = [[[0.25 if i == j else 0.0, 0.0] for j in range(4)] for i in range(4)]
        path.write_text(json.dumps({"dims": [2, 2], "matrix": matrix}))
        state = cli.state_parser(f"@{path}")
        np.testing.assert_allclose(state.matrix.entries, np.eye(4) / 4, atol=1e-12)

    def test_file_ket(self, tmp_path):
        path = tmp_path / "ket.json"
        amp = 1 / math.sqrt(2)
        path.write_text(json.dumps({"dims": [2, 2], "ket": [[0, 0], [amp, 0], [-amp, 0], [0, 0]]}))
        state = cli.state_parser(f"@{path}")
        assert abs(abs(state.ket.conj() @ singlet_ket()) - 1.0) < 1e-12

    def test_file_with_bad_trace_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        matrix = [[[1.0 if i == j else 0.0, 0.0] for j in range(4)] for i in range(4)]
        path.write_text(json.dumps({"dims": [2, 2], "matrix": matrix}))
        with pytest.raises(cli.UsageError):
            cli.state_parser(f"@{path}")


class TestRendering:
    def test_float_format_significant_digits(self):
        assert format_float(0.0) == "0"
        assert format_float(1.0) == "1"
        assert format_float(2.0 / 3.0) == "0.666666666667"

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            format_float(float("nan"))

    def test_render_json_orders_keys_as_constructed(self):
        text = render_json({"b": 1, "a": [1.5, None, True]})
        assert text == '{"b": 1, "a": [1.5, null, true]}'

    def test_render_csv(self):
        text = render_csv(["x", "y"], [[1, 0.5], [2, 0.25]])
        assert text == "x,y\n1,0.5\n2,0.25\n"

    def test_check_margin_semantics(self):
        assert Check.from_margin("ok", -0.5e-9, 1e-9).passed
        assert not Check.from_margin("bad", -2e-9, 1e-9).passed


class TestCommands:
    def test_info_singlet(self, capsys):
        code, out, _ = run(capsys, ["info", "--state", "singlet"])
        assert code == 0
        report = json.loads(out)
        assert report["schema"] == "locc-lab/1"
        assert abs(report["results"]["ledger"]["mutual"] - 2.0) < 1e-9
        assert report["results"]["ledger"]["classical"] == {"exact": 1.0}
        assert all(c["passed"] for c in report["checks"])
        assert all("tolerance" in c for c in report["checks"])

    def test_info_mixed_state_interval(self, capsys):
        code, out, _ = run(capsys, ["info", "--state", "maxmix"])
        assert code == 0
        report = json.loads(out)
        classical = report["results"]["ledger"]["classical"]
        assert classical["interval"] == [0.0, 1.0]
        assert classical["upper_bound_conjectural"] is True
        assert "classical_bounds" in report["results"]

    def test_tradeoff_single_partition(self, capsys):
        code, out, _ = run(capsys, ["tradeoff", "--n", "2", "--a2", "0.5", "--kq", "1"])
        assert code == 0
        report = json.loads(out)
        assert abs(report["results"]["i_total"] - 2.0) < 1e-9
        names = [c["name"] for c in report["checks"]]
        assert "balance_identity" in names and "tradeoff_bound" in names

    def test_tradeoff_sweep_csv(self, capsys):
        code, out, _ = run(capsys, ["tradeoff", "--n", "2", "--a2", "0.5", "--format", "csv"])
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "n,a2,kq_mask,e_d,i_c1,i_c2,i_er,i_total,margin_eq12,gap_asymptotic"
        assert len(lines) == 1 + 2**3

    def test_concentrate(self, capsys):
        code, out, _ = run(capsys, ["concentrate", "--n", "2", "--a2", "0.5"])
        assert code == 0
        report = json.loads(out)
        probs = [row["probability"] for row in report["results"]["outcomes"]]
        np.testing.assert_allclose(probs, [0.25, 0.5, 0.25], atol=1e-12)
        assert [row["schmidt_rank"] for row in report["results"]["outcomes"]] == [1, 2, 1]

    def test_singlet_demo(self, capsys):
        code, out, _ = run(capsys, ["singlet-demo"])
        assert code == 0
        report = json.loads(out)
        deltas = report["results"]["trace"]["deltas"]
        assert abs(deltas["classical_bits_gained"] - 1.0) < 1e-9
        assert abs(deltas["bits_dephased"] - 1.0) < 1e-9

    def test_teleport_demo_seeded(self, capsys):
        code, out, _ = run(capsys, ["teleport-demo", "--seed", "5"])
        assert code == 0
        report = json.loads(out)
        assert report["seed"] == 5
        assert abs(report["results"]["fidelity"] - 1.0) < 1e-9

    def test_commutator(self, capsys):
        code, out, _ = run(capsys, ["commutator", "--alpha", "1.0"])
        assert code == 0
        report = json.loads(out)
        assert report["results"]["global_commutator_norm"] == 0
        assert abs(report["results"]["entangling_entropy"] - 1.0) < 1e-9
        assert report["results"]["restricted_min"]["norm"] > 4.0

    def test_prop1(self, capsys):
        code, out, _ = run(capsys, ["prop1", "--samples", "300", "--seed", "7"])
        assert code == 0
        report = json.loads(out)
        assert report["results"]["false_commuters"] == 0
        assert report["results"]["dressed_certified"] == report["results"]["dressed_samples"]

    def test_sausage_single_input(self, capsys):
        code, out, _ = run(capsys, ["sausage", "--input", "psi10", "--trials", "50"])
        assert code == 0
        report = json.loads(out)
        transcript = report["results"]["transcripts"][0]
        assert transcript["verdict"] == "psi10"
        assert transcript["surplus_flag"] is True


class TestExitCodes:
    def test_unknown_subcommand(self, capsys):
        assert cli.main(["frobnicate"]) == 2

    def test_unknown_flag(self, capsys):
        assert cli.main(["info", "--state", "singlet", "--bogus"]) == 2

    def test_bad_state_spec(self, capsys):
        code, _, err = run(capsys, ["info", "--state", "no_such_state"])
        assert code == 2
        assert "error" in err

    def test_bad_state_file(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        matrix = [[[1.0 if i == j else 0.0, 0.0] for j in range(4)] for i in range(4)]
        path.write_text(json.dumps({"dims": [2, 2], "matrix": matrix}))
        code, _, err = run(capsys, ["info", "--state", f"@{path}"])
        assert code == 2

    def test_missing_required_argument(self, capsys):
        assert cli.main(["concentrate", "--n", "4"]) == 2

    def test_failed_check_exits_one(self, capsys, monkeypatch):
        def broken(args, seed):
            return {}, {}, [Check.from_margin("forced_failure", -1.0, 1e-9)], None, None

        monkeypatch.setitem(cli.HANDLERS, "singlet-demo", broken)
        code, out, _ = run(capsys, ["singlet-demo"])
        assert code == 1
        report = json.loads(out)  # report still emitted
        assert report["checks"][0]["passed"] is False


class TestDeterminism:
    def test_reports_byte_identical(self, capsys):
        argv = ["tradeoff", "--n", "3", "--a2", "0.3", "--seed", "9"]
        _, first, _ = run(capsys, argv)
        _, second, _ = run(capsys, argv)
        assert first == second

    def test_env_seed_fallback(self, capsys, monkeypatch):
        monkeypatch.setenv("LOCC_LAB_SEED", "5")
        _, via_env, _ = run(capsys, ["teleport-demo"])
        monkeypatch.delenv("LOCC_LAB_SEED")
        _, via_flag, _ = run(capsys, ["teleport-demo", "--seed", "5"])
        assert via_env == via_flag

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "report.json"
        code, out, _ = run(capsys, ["info", "--state", "singlet", "--out", str(path)])
        assert code == 0
        assert out == ""
        report = json.loads(path.read_text())
        assert report["command"] == "info"
