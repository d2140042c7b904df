"""Command line behavior: subcommands, exit codes, stdout/stderr split."""

import json

import pytest
from click.testing import CliRunner

from conftest import ALARIS, MINIMED
from emuc.cli import main


@pytest.fixture
def runner():
    return CliRunner()


BAD_MODEL = "diagram t\nnodes a\ninitial a\na -> ghost : go\n"


class TestTopLevel:
    def test_no_args_exits_2_with_help(self, runner):
        res = runner.invoke(main, [])
        assert res.exit_code == 2

    def test_version(self, runner):
        res = runner.invoke(main, ["--version"])
        assert res.exit_code == 0 and "emuc" in res.output


class TestParse:
    def test_echoes_normalized_model(self, runner):
        res = runner.invoke(main, ["parse", str(MINIMED)])
        assert res.exit_code == 0
        assert res.stdout.startswith("diagram minimed\n")

    def test_parse_error_exits_1(self, runner, tmp_path):
        p = tmp_path / "bad.emuc"
        p.write_text(BAD_MODEL)
        res = runner.invoke(main, ["parse", str(p)])
        assert res.exit_code == 1
        assert "bad.emuc" in res.stderr

    def test_missing_file_is_usage_error(self, runner):
        res = runner.invoke(main, ["parse", "no-such-file.emuc"])
        assert res.exit_code == 2


class TestCheck:
    def test_clean_model(self, runner):
        res = runner.invoke(main, ["check", str(MINIMED)])
        assert res.exit_code == 0
        assert "ok" in res.stderr

    def test_structural_error_exits_1(self, runner, tmp_path):
        p = tmp_path / "m.emuc"
        p.write_text("diagram t\nnodes a, b\ninitial a\n")
        res = runner.invoke(main, ["check", str(p)])
        assert res.exit_code == 1
        assert "unreachable" in res.stderr


class TestSimulate:
    def test_trace_to_stdout(self, runner):
        res = runner.invoke(
            main, ["simulate", str(MINIMED)],
            input="click_on_off\nclick_UP\n")
        assert res.exit_code == 0
        assert res.stdout.splitlines() == [
            "off;off;display=0.0",
            "on;off;display=0.0",
            "on;on;display=0.1",
        ]

    def test_events_file(self, runner, tmp_path):
        ev = tmp_path / "events.txt"
        ev.write_text("click_on_off\n\nclick_UP\n")
        res = runner.invoke(main, ["simulate", str(MINIMED),
                                   "--events", str(ev)])
        assert res.exit_code == 0
        assert res.stdout.count("\n") == 3

    def test_unknown_trigger_exits_1(self, runner):
        res = runner.invoke(main, ["simulate", str(MINIMED)], input="zap\n")
        assert res.exit_code == 1


class TestGen:
    def test_writes_five_files(self, runner, tmp_path):
        out = tmp_path / "out"
        res = runner.invoke(main, ["gen", str(MINIMED), "-o", str(out)])
        assert res.exit_code == 0
        names = sorted(p.name for p in out.iterdir())
        assert names == ["Makefile", "minimed.c", "minimed.h",
                         "minimed.md", "minimed_driver.c"]

    def test_no_asserts_flag(self, runner, tmp_path):
        out = tmp_path / "out"
        res = runner.invoke(main, ["gen", str(MINIMED), "-o", str(out),
                                   "--no-asserts"])
        assert res.exit_code == 0
        assert "assert(" not in (out / "minimed.c").read_text()


class TestLint:
    def test_clean_generated_files(self, runner, tmp_path):
        out = tmp_path / "out"
        runner.invoke(main, ["gen", str(MINIMED), "-o", str(out)])
        res = runner.invoke(main, ["lint", str(out / "minimed.h"),
                                   str(out / "minimed.c")])
        assert res.exit_code == 0

    def test_violation_exits_1(self, runner, tmp_path):
        p = tmp_path / "bad.c"
        p.write_text("void f(void) { goto x; x: return; }\n")
        res = runner.invoke(main, ["lint", str(p)])
        assert res.exit_code == 1
        assert "R1" in res.stderr


class TestDifftest:
    def test_small_run_with_report(self, runner, tmp_path):
        report = tmp_path / "report.json"
        res = runner.invoke(main, ["difftest", str(MINIMED),
                                   "--n", "20", "--len", "40",
                                   "--report", str(report)])
        assert res.exit_code == 0
        data = json.loads(report.read_text())
        assert data["equivalent"] is True
        assert data["sequences_run"] == 20

    def test_alaris_small_run(self, runner):
        res = runner.invoke(main, ["difftest", str(ALARIS),
                                   "--n", "10", "--len", "30"])
        assert res.exit_code == 0
        assert "0 divergence(s)" in res.stderr
