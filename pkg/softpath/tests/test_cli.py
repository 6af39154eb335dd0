import pytest
from click.testing import CliRunner

from softpath.bin.cli import main


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


def test_run_script_file(runner, bridges_script, tmp_path):
    script = tmp_path / "bridges.sp"
    script.write_text(bridges_script)
    out_dir = tmp_path / "out"

    result = runner.invoke(main, ["run", str(script), "--out", str(out_dir)])
    assert result.exit_code == 0
    assert result.stdout.startswith("M 0 0\n")
    assert (out_dir / "bridges.svg").exists()


def test_eval(runner):
    commands = ['load a "M 0 0 L 2 0"', "reverse a", "show a"]
    result = runner.invoke(main, ["eval", *commands])
    assert result.exit_code == 0
    assert result.stdout == "M 2 0\nL 0 0\n"


def test_eval_verbose(runner, tmp_path):
    result = runner.invoke(
        main, ["-v", "eval", 'load a "M 0 0 L 1 0"', "svg a", "-o", str(tmp_path)]
    )
    assert result.exit_code == 0
    assert (tmp_path / "a.svg").exists()


@pytest.mark.parametrize(
    "args, exit_code",
    [
        (["eval", "frobnicate a"], 1),
        (["eval", "loadfile a missing.sp"], 1),
        (["eval"], 2),
        (["run", "no-such-script.sp"], 2),
    ],
)
def test_failures(runner, args, exit_code):
    assert runner.invoke(main, args).exit_code == exit_code
