import math

import pytest

from qdisk.cli import main, run_scenario
from qdisk.scenario import (
    DualTrackSession,
    ScenarioParseError,
    ScenarioRuntimeError,
    parse_scenario,
)
from qdisk.verify import BREAKDOWN, SOUND


class TestParser:
    def test_comments_and_blanks_are_skipped(self):
        scenario = parse_scenario("# setup\n\nqubit a 1 0  # basis state\n")
        assert len(scenario.commands) == 1
        assert scenario.commands[0].kind == "qubit"

    def test_unknown_command_reports_line(self):
        with pytest.raises(ScenarioParseError) as err:
            parse_scenario("qubit a 1 0\nfrobnicate a\n")
        assert err.value.line_no == 2

    def test_reference_before_declaration(self):
        with pytest.raises(ScenarioParseError):
            parse_scenario("gate H a\n")

    def test_duplicate_declaration(self):
        with pytest.raises(ScenarioParseError):
            parse_scenario("qubit a 1 0\nqubit a 0.5 0.5\n")

    def test_pair_requires_four_nonnegative_areas(self):
        with pytest.raises(ScenarioParseError):
            parse_scenario("pair a b 0.5 0.5 -0.5 0.5\n")

    def test_cnot_needs_distinct_qubits(self):
        with pytest.raises(ScenarioParseError):
            parse_scenario("qubit a 1 0\ncnot a a\n")

    def test_render_rejects_paths(self):
        with pytest.raises(ScenarioParseError):
            parse_scenario("qubit a 1 0\nrender svg ../escape.svg\n")

    def test_bad_number(self):
        with pytest.raises(ScenarioParseError):
            parse_scenario("qubit a one zero\n")

    def test_teleport_fraction_range(self):
        with pytest.raises(ScenarioParseError):
            parse_scenario("teleport full 1.5\n")


class TestSession:
    def test_double_hadamard_scenario_ends_sound(self):
        session = DualTrackSession(seed=0)
        for line in ["qubit a 0.5 0.5", "gate H a", "gate H a", "cancel", "audit"]:
            session.run_line(line)
        assert session.reports[-1].classification == SOUND
        assert session.reports[-1].max_abs_gap == pytest.approx(0.0, abs=1e-9)

    def test_fig9_scenario_reports_breakdown(self):
        session = DualTrackSession(seed=0)
        for line in ["qubit a 0.6666667 0.3333333", "gate H a", "audit"]:
            session.run_line(line)
        assert session.reports[-1].classification == BREAKDOWN

    def test_empty_lines_produce_no_steps(self):
        session = DualTrackSession(seed=0)
        assert session.run_line("   # nothing") is None
        assert session.transcript == []

    def test_measure_consumes_one_draw_for_all_qubits(self):
        session = DualTrackSession(seed=9)
        session.run_line("epr a b")
        result = session.run_line("measure a b")
        assert len(result.outcomes) == 2
        # correlated pair: both windows read the same color
        assert result.outcomes[0].color is result.outcomes[1].color
        assert result.outcomes[0].window_angle == result.outcomes[1].window_angle

    def test_pair_declaration_matches_gray_areas(self):
        session = DualTrackSession(seed=0)
        session.run_line("pair a b 0.1 0.3 0.2 0.4")
        summary = session.state_summary()
        assert summary["naive"] == pytest.approx([0.1, 0.3, 0.4, 0.2], abs=1e-9)

    def test_runtime_error_carries_step_index(self):
        session = DualTrackSession(seed=0)
        with pytest.raises(ScenarioRuntimeError) as err:
            session.run_line("cancel")
        assert err.value.step_index == 1

    def test_measuring_diverged_state_is_runtime_error(self):
        session = DualTrackSession(seed=0)
        session.run_line("qubit a 0.5 0.5")
        session.run_line("gate H a")
        # without cancel the disk keeps orange area while the exact state is
        # |0>; forcing the exact track onto an orange outcome must fail
        with pytest.raises(ScenarioRuntimeError):
            for _ in range(50):
                session.run_line("measure a")

    def test_bb84_command_embeds_grid(self):
        session = DualTrackSession(seed=4)
        result = session.run_line("bb84 8 eve")
        assert len(result.data["rounds"]) == 8
        assert "round=0001" in session.transcript_text()

    def test_teleport_command_reports_corrections(self):
        session = DualTrackSession(seed=4)
        result = session.run_line("teleport full 0.72")
        transcript = result.data["teleport"]
        assert set(transcript.corrections_applied) <= {"X", "Z"}
        assert "bob_final:" in session.transcript_text()


class TestRunScenario:
    def test_artifacts_written(self, tmp_path):
        script = "qubit a 0.5 0.5\ngate H a\ncancel\naudit\nrender svg disk.svg side\n"
        status = run_scenario(script, seed=1, out_dir=tmp_path)
        assert status == 0
        assert (tmp_path / "transcript.txt").exists()
        assert (tmp_path / "audit.txt").exists()
        assert (tmp_path / "disk.svg").read_text(encoding="utf-8").startswith("<svg")

    def test_breakdown_does_not_fail_the_run(self, tmp_path):
        script = "qubit a 0.6666667 0.3333333\ngate H a\naudit\n"
        status = run_scenario(script, seed=1, out_dir=tmp_path)
        assert status == 0
        assert "Breakdown" in (tmp_path / "audit.txt").read_text(encoding="utf-8")

    def test_empty_script_is_ok(self, tmp_path):
        status = run_scenario("", seed=1, out_dir=tmp_path)
        assert status == 0
        assert (tmp_path / "transcript.txt").read_text(encoding="utf-8") == ""

    def test_parse_error_exit_code(self, tmp_path):
        assert run_scenario("bogus\n", seed=1, out_dir=tmp_path) == 1

    def test_runtime_error_exit_code(self, tmp_path):
        assert run_scenario("cancel\n", seed=1, out_dir=tmp_path) == 2

    def test_identical_seeds_reproduce_artifacts(self, tmp_path):
        script = (
            "qubit a 0.3 0.7\n"
            "epr b c\n"
            "gate H a\n"
            "measure a b\n"
            "render svg state.svg side\n"
            "bb84 20 eve\n"
            "teleport full 0.72\n"
            "audit\n"
        )
        first, second = tmp_path / "one", tmp_path / "two"
        assert run_scenario(script, seed=123, out_dir=first) == 0
        assert run_scenario(script, seed=123, out_dir=second) == 0
        for name in ("transcript.txt", "audit.txt", "state.svg"):
            assert (first / name).read_bytes() == (second / name).read_bytes()

    def test_different_seed_changes_transcript(self, tmp_path):
        script = "epr a b\nmeasure a\n"
        first, second = tmp_path / "one", tmp_path / "two"
        run_scenario(script, seed=6, out_dir=first)
        run_scenario(script, seed=8, out_dir=second)
        assert (first / "transcript.txt").exists() and (second / "transcript.txt").exists()


class TestCliMain:
    def test_run_subcommand(self, tmp_path):
        script = tmp_path / "demo.q"
        script.write_text("qubit a 0.5 0.5\ngate H a\ncancel\naudit\n", encoding="utf-8")
        status = main(["--seed", "3", "--out", str(tmp_path / "out"), "run", str(script)])
        assert status == 0
        assert (tmp_path / "out" / "audit.txt").exists()

    def test_missing_script_file(self, tmp_path):
        status = main(["--out", str(tmp_path), "run", str(tmp_path / "absent.q")])
        assert status == 1

    def test_bb84_subcommand(self, tmp_path):
        status = main(["--seed", "5", "--out", str(tmp_path), "bb84", "40", "--eve"])
        assert status == 0
        text = (tmp_path / "transcript.txt").read_text(encoding="utf-8")
        assert "qber=" in text

    def test_teleport_subcommand(self, tmp_path):
        status = main(["--seed", "5", "--out", str(tmp_path), "teleport", "classical", "0.7"])
        assert status == 0
        assert "stage=classical" in (tmp_path / "transcript.txt").read_text(encoding="utf-8")

    def test_render_subcommand(self, tmp_path):
        status = main(
            [
                "--out",
                str(tmp_path),
                "render",
                "--pair",
                "0.3333333333",
                "0.1666666667",
                "0.3333333333",
                "0.1666666667",
                "--layout",
                "stacked",
                "--file",
                "pair.svg",
            ]
        )
        assert status == 0
        assert (tmp_path / "pair.svg").read_text(encoding="utf-8").startswith("<svg")
