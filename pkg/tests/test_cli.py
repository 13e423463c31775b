import pytest

from pottslab.cli import main
from pottslab.experiments import Manifest


def test_oracle_check_from_the_command_line(tmp_path, capsys):
    status = main(["oracle-check", "--out", str(tmp_path)])

    out = capsys.readouterr().out
    assert status == 0
    assert "ES-coupling TV distance:" in out
    assert f"artifacts in {tmp_path / 'oracle-check'}" in out
    assert Manifest.load(tmp_path / "oracle-check" / "manifest.json").command == "oracle-check"


def test_show_config_applies_overrides(capsys):
    status = main(["show-config", "--set", "model.q=5", "--set", "run.seed = 3"])

    out = capsys.readouterr().out
    assert status == 0
    assert "model.q = 5\n" in out
    assert "run.seed = 3\n" in out
    assert "model.beta = 0.8\n" in out


def test_config_file_and_out_flag(tmp_path, capsys):
    path = tmp_path / "lab.cfg"
    path.write_text("model.d = 2\nmodel.n = 3\n", encoding="utf-8")

    status = main(["show-config", "--config", str(path), "--out", "runs/a b"])

    out = capsys.readouterr().out
    assert status == 0
    assert "model.n = 3\n" in out
    assert 'output.directory = "runs/a b"\n' in out


def test_bad_override_exits_with_two(capsys):
    status = main(["sample", "--set", "model.size=3"])

    assert status == 2
    assert "pottslab: unknown config key 'model.size'" in capsys.readouterr().err


def test_missing_config_file_exits_with_two(tmp_path, capsys):
    status = main(["sample", "--config", str(tmp_path / "nope.cfg")])

    assert status == 2
    assert "cannot read config file" in capsys.readouterr().err


def test_failures_go_to_stderr(tmp_path, capsys):
    status = main(
        ["wulff", "--out", str(tmp_path), "--set", "model.d=2", "--set", "tau.kind=axis"]
    )

    captured = capsys.readouterr()
    assert status == 2
    assert "axis model needs 2 axis values" in captured.err
    assert "artifacts in" not in captured.err


def test_unknown_subcommand_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["simulate"])

    assert excinfo.value.code == 2
    assert "invalid choice" in capsys.readouterr().err
