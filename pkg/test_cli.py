"""
Tests: command line (tripwell)
"""
import io

import numpy as np
import orjson
import pandas as pd
import pytest

from adapters.output import RunManifest, manifest_path
from main import EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE, UsageError, attach_negative_values, parse_grid, run_command

FIG2_ARGS = ["--delta", "-0.4", "--v", "0.1", "--w", "0.2", "--g", "-0.4"]


def eigen(tmp_path, name="eigen.csv", *extra):
    out = tmp_path / name
    code = run_command(["eigen", *FIG2_ARGS, "--eps", "-0.8:0.8:5", "--out", str(out), *extra])
    return code, out


def test_parse_grid_forms():
    assert parse_grid("0:1:3") == [0.0, 0.5, 1.0]
    assert parse_grid("-0.4") == [-0.4]
    assert parse_grid("0.2,0.4,0.6") == [0.2, 0.4, 0.6]
    assert parse_grid("1e-3:1e-1:3", log=True) == pytest.approx([1e-3, 1e-2, 1e-1])
    assert parse_grid("2:2:1") == [2.0]


@pytest.mark.parametrize("text, log", [("0:1", False), ("0:1:0", False), ("0:1:3", True), ("a,b", False),
                                       ("1:inf:3", False)])
def test_parse_grid_rejects(text, log):
    with pytest.raises((UsageError, ValueError)):
        parse_grid(text, log=log)


def test_negative_values_are_attached_to_flags():
    argv = ["eigen", "--eps", "-0.8:0.8:9", "--g", "-.4", "--v", "0.1", "--out", "-"]
    assert attach_negative_values(argv) == ["eigen", "--eps=-0.8:0.8:9", "--g=-.4", "--v", "0.1", "--out", "-"]


def test_eigen_scan_writes_csv_and_manifest(tmp_path):
    code, out = eigen(tmp_path)
    assert code == EXIT_OK
    frame = pd.read_csv(out)
    assert list(frame.columns) == ["epsilon", "branch_id", "mu", "a2", "b2", "c2", "classification", "fold_flag"]
    assert sorted(frame["epsilon"].unique()) == pytest.approx(np.linspace(-0.8, 0.8, 5))
    assert set(frame["classification"]) <= {"elliptic", "hyperbolic"}
    # loop region at epsilon = -0.4 carries extra states
    assert np.isclose(frame["epsilon"], -0.4).sum() > 3
    # scan mode: branch_id is the rank by mu at each epsilon
    for _, group in frame.groupby("epsilon"):
        assert list(group["branch_id"]) == list(range(len(group)))
        assert np.all(np.diff(group["mu"].to_numpy()) >= -1e-12)
    assert out.read_bytes().endswith(b"\n") and b"\r\n" not in out.read_bytes()

    manifest = RunManifest.load(manifest_path(str(out)))
    assert manifest.command[:2] == ["tripwell", "eigen"]
    assert manifest.config["options"]["g"] == -0.4
    assert manifest.run["replay_argv"][0] == "eigen"


def test_eigen_output_is_deterministic(tmp_path):
    _, first = eigen(tmp_path, "a.csv")
    _, second = eigen(tmp_path, "b.csv", "--threads", "2")
    assert first.read_bytes() == second.read_bytes()


def test_eigen_continue_marks_folds(tmp_path):
    out = tmp_path / "branches.csv"
    code = run_command(["eigen", *FIG2_ARGS, "--eps", "-0.8:0.8:2", "--mode", "continue", "--out", str(out)])
    assert code == EXIT_OK
    frame = pd.read_csv(out)
    assert set(frame["branch_id"]) == {0, 1, 2}
    assert frame.loc[frame["branch_id"] == 0, "fold_flag"].sum() >= 2
    manifest = manifest_path(str(out))
    assert manifest.exists()
    folds = RunManifest.load(manifest).run["folds"]
    assert set(folds) == {"0", "1", "2"}
    assert len(folds["0"]) >= 2


def test_replay_reproduces_output(tmp_path):
    _, out = eigen(tmp_path)
    again = tmp_path / "again.csv"
    assert run_command(["replay", str(manifest_path(str(out))), "--out", str(again)]) == EXIT_OK
    assert again.read_bytes() == out.read_bytes()


def test_config_file_with_flag_override(tmp_path):
    settings = tmp_path / "run.env"
    settings.write_text("delta=-0.4\nv=0.1\nw=0.2\ng=-0.4\neps=-0.5,0.5\n")
    out = tmp_path / "linear.csv"
    code = run_command(["eigen", "--config", str(settings), "--g", "0", "--out", str(out)])
    assert code == EXIT_OK
    frame = pd.read_csv(out)
    assert sorted(frame["epsilon"].unique()) == [-0.5, 0.5]
    assert (frame.groupby("epsilon").size() == 3).all()
    options = RunManifest.load(manifest_path(str(out))).config["options"]
    assert options["g"] == 0.0
    assert options["delta"] == -0.4


def test_json_output_embeds_manifest(tmp_path):
    out = tmp_path / "eigen.json"
    code = run_command(["eigen", "--eps", "0.3", "--format", "json", "--out", str(out)])
    assert code == EXIT_OK
    payload = orjson.loads(out.read_bytes())
    assert payload["columns"][:3] == ["epsilon", "branch_id", "mu"]
    assert len(payload["rows"]) == 3
    assert payload["manifest"]["command"][1] == "eigen"
    assert not manifest_path(str(out)).exists()


def test_stdout_output(monkeypatch):
    buffer = io.BytesIO()
    monkeypatch.setattr("sys.stdout", io.TextIOWrapper(buffer, encoding="utf-8"))
    assert run_command(["eigen", "--eps", "0.3", "--out", "-"]) == EXIT_OK
    text = buffer.getvalue().decode()
    assert text.splitlines()[0].startswith("epsilon,branch_id,mu")


@pytest.mark.parametrize("argv", [
    ["eigen", "--eps", "0:1"],
    ["eigen", "--mode", "sideways"],
    ["eigen", "--eps", "0.1", "--mode", "continue"],
    ["eigen", "--threads", "0"],
    ["lz", "run", "--v", "0.1"],
    ["lz", "run", "--alpha", "-1"],
    ["lz", "run", "--alpha", "0.1", "--level", "top"],
    ["lz", "sweep", "--alpha", "0.1,-0.1"],
    ["stirap", "run", "--t-start=-1000", "--t-end", "1000"],
    ["stirap", "levels", "--times", "0,5000"],
])
def test_usage_errors(argv):
    assert run_command(argv) == EXIT_USAGE


def test_parser_errors_exit_with_usage_code():
    with pytest.raises(SystemExit) as info:
        run_command(["teleport"])
    assert info.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        run_command(["eigen", "--unknown", "1"])
    assert info.value.code == EXIT_USAGE


def test_unknown_config_key(tmp_path):
    settings = tmp_path / "bad.env"
    settings.write_text("alpha=0.1\n")
    assert run_command(["eigen", "--config", str(settings)]) == EXIT_USAGE
    assert run_command(["eigen", "--config", str(tmp_path / "missing.env")]) == EXIT_USAGE


def test_numerical_failure_writes_nothing(tmp_path):
    out = tmp_path / "loose.csv"
    code = run_command(["stirap", "run", "--tol", "1e-3", "--out", str(out)])
    assert code == EXIT_NUMERICAL
    assert not out.exists()


def test_stirap_sweep_table(tmp_path):
    out = tmp_path / "stirap.csv"
    code = run_command(["stirap", "sweep", "--delta-detuning", "0.1", "--g", "0", "--out", str(out)])
    assert code == EXIT_OK
    frame = pd.read_csv(out)
    assert list(frame.columns) == ["g", "efficiency", "feasible", "horn_scenario"]
    assert frame["efficiency"].iloc[0] > 0.999
    assert frame["horn_scenario"].iloc[0] == "NoHorn"
