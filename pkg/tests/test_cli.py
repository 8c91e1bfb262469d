"""End-to-end CLI behavior: outputs, pipelines, exit codes, help."""

import json
import re
from pathlib import Path

import pytest

from compresslaw.cli import build_parser, run
from compresslaw.io import builtin_registry, load_registry, registry_to_json, save_law
from compresslaw.laws import CompressionLaw, MetricKind, RuntimeLaw
from compresslaw.io import LawRegistry, RegistryEntry

EXTRINSIC = CompressionLaw(0.98, -1.03, -0.14, MetricKind.ACCURACY)
LLAMA8B = CompressionLaw(0.98, -1.18, -0.14, MetricKind.ACCURACY)

GOLDEN_FLAGS = json.loads((Path(__file__).parent / "data" / "cli_help_flags.json").read_text())


def run_json(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


class TestCritical:
    def test_worked_example(self, capsys):
        code, doc = run_json(capsys, ["critical", "--beta", "-1.18", "--sigma", "0.8", "--metric", "accuracy"])
        assert code == 0
        assert doc["regime"] == "conditionally-recoverable"
        assert doc["r_critical"] == pytest.approx(0.208, abs=0.002)
        assert doc["boundary"] == pytest.approx(0.441, abs=0.002)

    def test_always_recoverable(self, capsys):
        code, doc = run_json(capsys, ["critical", "--beta", "-1.18", "--sigma", "0.3", "--metric", "accuracy"])
        assert code == 0
        assert doc["regime"] == "always-recoverable"
        assert doc["r_critical"] is None


class TestPredict:
    def test_identity_law_echoes_l0(self, capsys, tmp_path):
        law_path = tmp_path / "identity.json"
        save_law(CompressionLaw(1.0, 0.0, 0.0, MetricKind.LOSS), law_path)
        code, doc = run_json(capsys, ["predict", "--law", str(law_path), "--l0", "3.7", "--r", "0.4", "--d", "10"])
        assert code == 0
        assert doc["prediction"] == pytest.approx(3.7, rel=1e-12)

    def test_runtime_law(self, capsys, tmp_path):
        law_path = tmp_path / "runtime.json"
        save_law(RuntimeLaw(c=100.0, beta=-0.67), law_path)
        code, doc = run_json(capsys, ["predict", "--law", str(law_path), "--r", "0.5"])
        assert code == 0
        assert doc["prediction"] == pytest.approx(76.21, abs=0.05)

    def test_runtime_law_rejects_l0(self, capsys, tmp_path):
        law_path = tmp_path / "runtime.json"
        save_law(RuntimeLaw(c=100.0, beta=-0.67), law_path)
        code, doc = run_json(capsys, ["predict", "--law", str(law_path), "--r", "0.5", "--l0", "1.0"])
        assert code == 1
        assert "error" in doc

    def test_compression_law_requires_l0(self, capsys, tmp_path):
        law_path = tmp_path / "law.json"
        save_law(EXTRINSIC, law_path)
        code, doc = run_json(capsys, ["predict", "--law", str(law_path), "--r", "0.5"])
        assert code == 1
        assert "--l0" in doc["error"]["message"]


class TestMinRft:
    @pytest.fixture()
    def law_path(self, tmp_path):
        path = tmp_path / "llama8b.json"
        save_law(LLAMA8B, path)
        return str(path)

    def test_recoverable_point(self, capsys, law_path):
        code, doc = run_json(capsys, ["min-rft", "--law", law_path, "--sigma", "0.8", "--r", "0.19"])
        assert code == 0
        assert doc["min_rft_size"] == pytest.approx(6.341, abs=0.01)

    def test_unrecoverable_point(self, capsys, law_path):
        code, doc = run_json(capsys, ["min-rft", "--law", law_path, "--sigma", "0.8", "--r", "0.25"])
        assert code == 0
        assert doc["min_rft_size"] == "unrecoverable"
        assert doc["r_critical"] == pytest.approx(0.208, abs=0.002)


class TestSynthFitPipeline:
    def test_noiseless_round_trip(self, capsys, tmp_path):
        law_path = tmp_path / "truth.json"
        save_law(EXTRINSIC, law_path)
        grid_path = tmp_path / "grid.json"
        grid_path.write_text(
            json.dumps(
                {
                    "l0_values": [0.4, 0.55, 0.7],
                    "r_values": [0.1, 0.3, 0.5, 0.7, 0.9],
                    "d_values": [0, 10, 1000, 25000],
                }
            )
        )
        out_path = tmp_path / "records.csv"
        code, doc = run_json(
            capsys,
            ["synth", "--truth", str(law_path), "--grid", str(grid_path), "--seed", "0", "--out", str(out_path)],
        )
        assert code == 0
        assert doc["records_written"] == 60

        code = run(["fit", "--input", str(out_path), "--form", "full"])
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["law"]["alpha"] == pytest.approx(0.98, abs=1e-8)
        assert report["law"]["beta"] == pytest.approx(-1.03, abs=1e-8)
        assert report["law"]["gamma"] == pytest.approx(-0.14, abs=1e-8)
        assert report["warnings"] == []

    def test_synth_to_stdout(self, capsys, tmp_path):
        law_path = tmp_path / "truth.json"
        save_law(EXTRINSIC, law_path)
        grid_path = tmp_path / "grid.json"
        grid_path.write_text(json.dumps({"l0_values": [0.5], "r_values": [0.1, 0.5], "d_values": [0, 10]}))
        code = run(["synth", "--truth", str(law_path), "--grid", str(grid_path), "--seed", "1", "--out", "-"])
        assert code == 0
        out = capsys.readouterr().out
        assert out.startswith("model_id,metric,l0,r,d,l")
        assert len(out.strip().splitlines()) == 5

    def test_fit_reads_stdin(self, capsys, monkeypatch, tmp_path):
        import io as stdio

        csv_text = "model_id,metric,l0,r,d,l\n" + "".join(
            f"m,loss,{l0},{r},{d},{l0}\n" for l0 in (1.5, 2.0, 4.0) for r in (0.1, 0.5) for d in (0, 10)
        )
        monkeypatch.setattr("sys.stdin", stdio.StringIO(csv_text))
        code = run(["fit", "--input", "-"])
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["law"]["alpha"] == pytest.approx(1.0, abs=1e-10)


class TestPlan:
    @pytest.fixture()
    def registry_path(self, tmp_path):
        registry = LawRegistry(
            [
                RegistryEntry("qwen-2.5-3b", MetricKind.ACCURACY, "t",
                              CompressionLaw(0.91, -1.19, -0.11, MetricKind.ACCURACY),
                              param_count=3e9, l0=0.6),
                RegistryEntry("qwen-2.5-7b", MetricKind.ACCURACY, "t",
                              CompressionLaw(0.64, -1.34, -0.11, MetricKind.ACCURACY),
                              param_count=7e9, l0=0.6),
            ]
        )
        path = tmp_path / "registry.json"
        path.write_text(registry_to_json(registry))
        return str(path)

    def test_ranking(self, capsys, registry_path):
        code, doc = run_json(
            capsys,
            ["plan", "--registry", registry_path, "--budget", "1.5e9", "--d", "0", "--metric", "accuracy"],
        )
        assert code == 0
        assert [e["model_id"] for e in doc["entries"]] == ["qwen-2.5-3b", "qwen-2.5-7b"]
        assert doc["entries"][0]["predicted_performance"] == pytest.approx(0.3592987779, abs=1e-3)
        assert doc["skipped"] == []

    def test_builtin_registry_needs_l0(self, capsys, tmp_path):
        path = tmp_path / "builtin.json"
        path.write_text(registry_to_json(builtin_registry()))
        code, doc = run_json(capsys, ["plan", "--registry", str(path), "--budget", "1e9", "--metric", "accuracy"])
        assert code == 1
        assert "l0" in doc["error"]["message"]


class TestFrontier:
    @pytest.fixture()
    def law_path(self, tmp_path):
        path = tmp_path / "law.json"
        save_law(EXTRINSIC, path)
        return str(path)

    def test_json_rows(self, capsys, law_path):
        code, doc = run_json(
            capsys,
            ["frontier", "--law", law_path, "--l0-list", "0.6", "--r-grid", "0.1,0.5", "--d-grid", "0,100"],
        )
        assert code == 0
        assert len(doc["rows"]) == 4
        assert doc["rows"][0]["predicted"] == pytest.approx(0.6**0.98 * 1.1**-1.03 * 2**-0.14, rel=1e-9)

    def test_csv_format(self, capsys, law_path):
        code = run(
            ["frontier", "--law", law_path, "--l0-list", "0.6", "--r-grid", "0.1", "--d-grid", "0", "--format", "csv"]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0] == "l0,r,d,predicted"


class TestExitCodes:
    def test_unknown_flag(self, capsys):
        assert run(["critical", "--beta", "-1", "--sigma", "0.5", "--metric", "accuracy", "--bogus"]) == 1

    def test_missing_subcommand(self, capsys):
        assert run([]) == 1

    def test_domain_error_is_single_line_object(self, capsys):
        code = run(["critical", "--beta", "-1.18", "--sigma", "1.5", "--metric", "accuracy"])
        assert code == 1
        out = capsys.readouterr().out
        assert len(out.strip().splitlines()) == 1
        doc = json.loads(out)
        assert doc["error"]["type"] == "DomainError"

    def test_missing_input_file_is_io_error(self, capsys, tmp_path):
        assert run(["fit", "--input", str(tmp_path / "nope.csv")]) == 2

    def test_invalid_csv_content_is_validation_error(self, capsys, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("model_id,metric,l0,r,d,l\nm,loss,2.0,1.4,0,3\n")
        code = run(["fit", "--input", str(path)])
        assert code == 1
        doc = json.loads(capsys.readouterr().out)
        assert "row 2" in doc["error"]["message"]

    def test_help_exits_zero(self, capsys):
        assert run(["--help"]) == 0
        assert run(["fit", "--help"]) == 0


class TestHelpGolden:
    @pytest.mark.parametrize("command", sorted(GOLDEN_FLAGS))
    def test_help_lists_every_flag(self, command, capsys):
        assert run([command, "--help"]) == 0
        help_text = capsys.readouterr().out
        listed = sorted(set(re.findall(r"--[a-z0-9-]+", help_text)))
        assert listed == GOLDEN_FLAGS[command]

    def test_golden_covers_all_subcommands(self, capsys):
        assert run(["--help"]) == 0
        top = capsys.readouterr().out
        for command in GOLDEN_FLAGS:
            assert command in top


class TestFixtureReproduction:
    def test_fit_reproduces_every_fixture_law_from_synth(self, capsys, tmp_path):
        """synth -> fit round trips every shipped compression law, form included."""
        grid = {"l0_values": [0.4, 0.9, 2.0, 4.5], "r_values": [0.1, 0.4, 0.8], "d_values": [0, 10, 1000]}
        grid_path = tmp_path / "grid.json"
        grid_path.write_text(json.dumps(grid))
        exponents = {"full": ("alpha", "beta", "gamma"), "ratio": ("alpha", "beta"), "data": ("alpha", "gamma")}
        for entry in builtin_registry():
            if isinstance(entry.law, RuntimeLaw):
                continue
            law_path = tmp_path / "law.json"
            save_law(entry.law, law_path)
            out_path = tmp_path / "records.csv"
            assert run(["synth", "--truth", str(law_path), "--grid", str(grid_path),
                        "--seed", "0", "--out", str(out_path)]) == 0
            capsys.readouterr()
            assert run(["fit", "--input", str(out_path), "--form", entry.form.value]) == 0
            report = json.loads(capsys.readouterr().out)
            for name in exponents[entry.form.value]:
                assert report["law"][name] == pytest.approx(getattr(entry.law, name), abs=1e-8), entry.key


class TestDeterminism:
    def test_same_invocation_same_bytes(self, capsys, tmp_path):
        law_path = tmp_path / "law.json"
        save_law(EXTRINSIC, law_path)
        argv = ["frontier", "--law", str(law_path), "--l0-list", "0.6,0.7", "--r-grid", "0.1,0.2", "--d-grid", "0,10"]
        assert run(argv) == 0
        first = capsys.readouterr().out
        assert run(argv) == 0
        assert capsys.readouterr().out == first
