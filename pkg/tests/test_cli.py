"""End-to-end command-line checks, run through ``python -m courtcast``.

Each test invokes the installed entry point in a subprocess, so argument
parsing, exit codes, config layering, and artifact bytes are all exercised
exactly as a user would hit them.
"""

from __future__ import annotations

import os
import subprocess
import sys
from pathlib import Path

import pytest

LEAGUE_FLAGS = ["--n-teams", "8", "--games-per-team", "14", "--n-seasons", "2",
                "--noise", "5", "--seed", "3"]


def run_cli(args, cwd, env=None):
    full_env = dict(os.environ)
    full_env.pop("COURTCAST_DATA_DIR", None)
    if env:
        full_env.update(env)
    return subprocess.run([sys.executable, "-m", "courtcast", *args],
                          cwd=cwd, env=full_env, capture_output=True, text=True)


@pytest.fixture(scope="module")
def league_dir(tmp_path_factory) -> Path:
    """One simulated league shared by every test in this module."""
    root = tmp_path_factory.mktemp("cli")
    proc = run_cli(["simulate", "--out", "sim", *LEAGUE_FLAGS], cwd=root)
    assert proc.returncode == 0, proc.stderr
    assert (root / "sim" / "games.csv").exists()
    return root


DATA = ["--data", "sim/games.csv"]


class TestExitCodes:
    def test_help_exits_zero(self, league_dir):
        proc = run_cli(["--help"], cwd=league_dir)
        assert proc.returncode == 0
        assert "courtcast" in proc.stdout

    def test_subcommand_help_exits_zero(self, league_dir):
        proc = run_cli(["evaluate", "--help"], cwd=league_dir)
        assert proc.returncode == 0
        assert "--scheme" in proc.stdout

    def test_no_command_is_a_usage_error(self, league_dir):
        assert run_cli([], cwd=league_dir).returncode == 1

    def test_unknown_kind_is_a_usage_error(self, league_dir):
        proc = run_cli(["evaluate", *DATA, "--out", "x", "--kind", "elo"],
                       cwd=league_dir)
        assert proc.returncode == 1
        assert "home_wins" in proc.stderr  # the message lists what is valid

    def test_bad_flag_value_is_a_usage_error(self, league_dir):
        proc = run_cli(["adjust", *DATA, "--out", "x", "--alpha", "chicken"],
                       cwd=league_dir)
        assert proc.returncode == 1

    def test_training_a_baseline_is_a_usage_error(self, league_dir):
        proc = run_cli(["train", *DATA, "--out", "x", "--kind", "pythag"],
                       cwd=league_dir)
        assert proc.returncode == 1

    def test_missing_data_file_is_a_data_error(self, league_dir):
        proc = run_cli(["evaluate", "--data", "nope.csv", "--out", "x"],
                       cwd=league_dir)
        assert proc.returncode == 2
        assert "nope.csv" in proc.stderr

    def test_unknown_test_season_is_a_data_error(self, league_dir):
        proc = run_cli(["rank", *DATA, "--out", "x", "--kind", "pythag",
                        "--test-season", "1999"], cwd=league_dir)
        assert proc.returncode == 2
        assert "1999" in proc.stderr

    def test_malformed_data_row_reports_file_and_line(self, league_dir, tmp_path):
        lines = (league_dir / "sim" / "games.csv").read_text().splitlines()
        first_row = next(i for i, ln in enumerate(lines) if not ln.startswith("#")) + 1
        lines[first_row] = lines[first_row].replace("2021-11", "2021-19", 1)
        bad = tmp_path / "mangled.csv"
        bad.write_text("\n".join(lines) + "\n")
        proc = run_cli(["stats", "--data", str(bad), "--out", "x"], cwd=tmp_path)
        assert proc.returncode == 2
        assert "mangled.csv" in proc.stderr


class TestConfigLayering:
    def test_flags_override_config_file_which_overrides_defaults(self, league_dir):
        cfg = league_dir / "layered.cfg"
        cfg.write_text("alpha = 0.3\nseed = 9\n# a comment\n")
        proc = run_cli(["adjust", *DATA, "--config", "layered.cfg",
                        "--out", "layered", "--alpha", "0.4"], cwd=league_dir)
        assert proc.returncode == 0, proc.stderr
        echoed = dict(
            line.split(" = ", 1)
            for line in (league_dir / "layered" / "run_config.cfg").read_text().splitlines())
        assert echoed["alpha"] == "0.4"       # flag beat the file
        assert echoed["seed"] == "9"          # file beat the default
        assert echoed["averaging"] == "alpha"  # default untouched

    def test_unknown_config_key_is_a_usage_error(self, league_dir):
        cfg = league_dir / "bad.cfg"
        cfg.write_text("zeta = 1\n")
        proc = run_cli(["adjust", *DATA, "--config", "bad.cfg", "--out", "x"],
                       cwd=league_dir)
        assert proc.returncode == 1
        assert "zeta" in proc.stderr

    def test_data_dir_env_var_supplies_the_default_data_path(self, league_dir):
        proc = run_cli(["adjust", "--out", "envout"], cwd=league_dir,
                       env={"COURTCAST_DATA_DIR": str(league_dir / "sim")})
        assert proc.returncode == 0, proc.stderr
        echo = (league_dir / "envout" / "run_config.cfg").read_text()
        assert str(league_dir / "sim") in echo

    def test_rerunning_the_emitted_config_reproduces_the_artifact(self, league_dir):
        first = run_cli(["evaluate", *DATA, "--out", "ev", "--kind",
                         "naive_bayes_kde", "--seed", "1"], cwd=league_dir)
        assert first.returncode == 0, first.stderr
        report = (league_dir / "ev" / "eval_report.csv").read_bytes()
        again = run_cli(["evaluate", "--config", "ev/run_config.cfg"],
                        cwd=league_dir)
        assert again.returncode == 0, again.stderr
        assert (league_dir / "ev" / "eval_report.csv").read_bytes() == report


class TestArtifacts:
    def test_every_artifact_opens_with_the_resolved_config(self, league_dir):
        proc = run_cli(["stats", *DATA, "--out", "stats_out"], cwd=league_dir)
        assert proc.returncode == 0, proc.stderr
        text = (league_dir / "stats_out" / "game_stats.csv").read_text()
        assert text.startswith("# data = sim/games.csv\n")
        assert "# seed = 0\n" in text

    def test_two_identical_runs_write_identical_report_bytes(self, league_dir):
        args = ["evaluate", *DATA, "--out", "twice", "--kind", "mlp", "--seed", "4"]
        assert run_cli(args, cwd=league_dir).returncode == 0
        first = (league_dir / "twice" / "eval_report.csv").read_bytes()
        curve1 = (league_dir / "twice" / "eval_curve.csv").read_bytes()
        assert run_cli(args, cwd=league_dir).returncode == 0
        assert (league_dir / "twice" / "eval_report.csv").read_bytes() == first
        assert (league_dir / "twice" / "eval_curve.csv").read_bytes() == curve1

    def test_train_then_predict_round_trip(self, league_dir):
        assert run_cli(["train", *DATA, "--out", "tp", "--kind", "decision_tree"],
                       cwd=league_dir).returncode == 0
        proc = run_cli(["predict", *DATA, "--out", "tp", "--kind", "decision_tree",
                        "--team-first", "t00", "--team-second", "t03",
                        "--location", "home"], cwd=league_dir)
        assert proc.returncode == 0, proc.stderr
        rows = [ln for ln in (league_dir / "tp" / "prediction.csv").read_text().splitlines()
                if ln and not ln.startswith("#")]
        header, row = rows[0].split(","), rows[1].split(",")
        p = float(row[header.index("p_first_wins")])
        assert 0.0 <= p <= 1.0
        assert row[header.index("predicted_winner")] in ("t00", "t03")

    def test_predict_with_mismatched_kind_is_a_data_error(self, league_dir):
        proc = run_cli(["predict", *DATA, "--out", "tp", "--kind", "mlp",
                        "--team-first", "t00", "--team-second", "t03"],
                       cwd=league_dir)
        assert proc.returncode == 2
        assert "decision_tree" in proc.stderr

    def test_predict_unknown_team_is_a_data_error(self, league_dir):
        proc = run_cli(["predict", *DATA, "--out", "tp", "--kind", "pythag",
                        "--team-first", "t00", "--team-second", "nobody"],
                       cwd=league_dir)
        assert proc.returncode == 2
        assert "nobody" in proc.stderr

    def test_rank_writes_a_full_ordering(self, league_dir):
        for kind, out in (("pythag", "rk_p"), ("rpi", "rk_r")):
            proc = run_cli(["rank", *DATA, "--out", out, "--kind", kind],
                           cwd=league_dir)
            assert proc.returncode == 0, proc.stderr
            rows = [ln for ln in (league_dir / out / "rankings.csv").read_text().splitlines()
                    if ln and not ln.startswith("#")][1:]
            assert [r.split(",")[0] for r in rows] == [str(n) for n in range(1, 9)]
            assert sorted(r.split(",")[1] for r in rows) == [f"t0{i}" for i in range(8)]

    def test_rank_rejects_the_home_wins_baseline(self, league_dir):
        proc = run_cli(["rank", *DATA, "--out", "x", "--kind", "home_wins"],
                       cwd=league_dir)
        assert proc.returncode == 1

    def test_simulate_writes_ground_truth_with_the_bayes_bound(self, league_dir):
        truth = (league_dir / "sim" / "league_truth.csv").read_text()
        assert "# bayes_accuracy = " in truth
        rows = [ln for ln in truth.splitlines()
                if ln and not ln.startswith("#")][1:]
        assert len(rows) == 8

    def test_glass_ceiling_grid_artifact(self, league_dir):
        proc = run_cli(["glass-ceiling", "--out", "gc", "--n-teams", "6",
                        "--games-per-team", "10", "--n-seasons", "2",
                        "--noise", "5", "--seed", "2",
                        "--kinds", "naive_bayes_kde,home_wins",
                        "--schemes", "adj_eff"], cwd=league_dir)
        assert proc.returncode == 0, proc.stderr
        text = (league_dir / "gc" / "ceiling.csv").read_text()
        assert "# bound = " in text and "# halfwidth = " in text
        rows = [ln for ln in text.splitlines() if ln and not ln.startswith("#")][1:]
        assert len(rows) == 2
        assert {r.split(",")[0] for r in rows} == {"naive_bayes_kde", "home_wins"}

    def test_glass_ceiling_hyper_must_be_kind_qualified(self, league_dir):
        proc = run_cli(["glass-ceiling", "--out", "x", "--hyper", "depth=3"],
                       cwd=league_dir)
        assert proc.returncode == 1
        assert "kind-qualified" in proc.stderr
