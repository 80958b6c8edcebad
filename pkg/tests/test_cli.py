import os
import sys
import h5py
import numpy as np
import pytest
from scipy import io as sio
from rgbdtrack.cli.main import main
from rgbdtrack.cli.utils import (
    EXIT_INGESTION,
    benchmark_sequence,
    uses_builtin_table
)
from rgbdtrack.data.results import read_result
from rgbdtrack.data.sequences import load_sequence
from rgbdtrack.tracking.colornames import load_table
from rgbdtrack.tracking.config import TrackerConfig


def _run(monkeypatch, *args: str) -> int:
    monkeypatch.setattr(sys, "argv", ["rgbdtrack", *args])
    return main()


def _exit_code(monkeypatch, *args: str) -> int:
    with pytest.raises(SystemExit) as e:
        _run(monkeypatch, *args)

    return e.value.code


def test_banner(monkeypatch, capsys):
    assert _exit_code(monkeypatch) == 0
    assert capsys.readouterr().out.startswith("rgbdtrack version")


@pytest.mark.parametrize(
    "args",
    [
        ("track",),
        ("unknown",),
        ("bench", "data", "--variant", "fancy"),
        ("synth", "spec.yaml")
    ]
)
def test_usage_errors(monkeypatch, args):
    assert _exit_code(monkeypatch, *args) == 1


def test_colornames(monkeypatch, tmp_path):
    file = str(tmp_path / "cn.bin")
    assert _run(monkeypatch, "colornames", "-o", file) == 0
    assert load_table(file).lookup.shape == (32768, 10)

    assert _exit_code(monkeypatch, "colornames", "-o", file) == 1
    assert _run(monkeypatch, "colornames", "-o", file, "--overwrite") == 0


def test_colornames_from_mat(monkeypatch, tmp_path):
    lookup = np.zeros((32768, 11))
    lookup[:, 0] = 1.0
    mat = str(tmp_path / "w2c.mat")
    sio.savemat(mat, {"w2c": lookup})
    file = str(tmp_path / "cn.bin")

    assert _run(monkeypatch, "colornames", "--from-mat", mat, "-o", file) == 0
    assert load_table(file).lookup[:, 0].min() == 1.0

    missing = str(tmp_path / "missing.mat")
    assert _exit_code(
        monkeypatch, "colornames", "--from-mat", missing, "-o", file,
        "--overwrite"
    ) == 1


def test_uses_builtin_table():
    assert uses_builtin_table(TrackerConfig())
    assert not uses_builtin_table(TrackerConfig(color_names_file="cn.bin"))
    assert not uses_builtin_table(TrackerConfig(use_color_names=False))


def test_eval(monkeypatch, tmp_path, capsys):
    result = tmp_path / "seq.txt"
    truth = tmp_path / "gt.txt"
    result.write_text("10,20,40,60\nNaN,NaN,NaN,NaN\n")
    truth.write_text("10,20,30,40\nNaN,NaN,NaN,NaN\n")

    assert _run(monkeypatch, "eval", str(result), str(truth)) == 0
    assert "Princeton" in capsys.readouterr().out

    truth.write_text("10,20,30,40\n")
    assert _exit_code(monkeypatch, "eval", str(result), str(truth)) == 3

    missing = str(tmp_path / "missing.txt")
    assert _exit_code(monkeypatch, "eval", missing, str(truth)) == 2


def test_synth(monkeypatch, tmp_path):
    config = tmp_path / "synth.yaml"
    config.write_text(
        "width: 96\n"
        "height: 80\n"
        "num_frames: 3\n"
        "target_size: [24, 24]\n"
        "target_start: [36, 28]\n"
        "sequences:\n"
        "  - name: tiny\n"
        "    category_tags: [rigid]\n"
    )
    out = str(tmp_path / "dataset")

    assert _run(monkeypatch, "synth", str(config), "-o", out) == 0
    assert len(os.listdir(os.path.join(out, "tiny", "rgb"))) == 3
    assert os.path.isfile(os.path.join(out, "categories.csv"))

    assert _exit_code(monkeypatch, "synth", str(config), "-o", out, "-u") == 1
    assert _run(
        monkeypatch, "synth", str(config), "-o", out, "--overwrite"
    ) == 0

    config.write_text("num_frames: 0\n")
    assert _exit_code(monkeypatch, "synth", str(config), "-o", out) == 1


def test_track(monkeypatch, tmp_path, toy_sequence_dir):
    out = str(tmp_path / "results")
    assert _run(
        monkeypatch, "track", toy_sequence_dir, "-o", out, "--debug-masks"
    ) == 0

    result = read_result(os.path.join(out, "toy.txt"))
    assert len(result) == 5

    with h5py.File(os.path.join(out, "toy_masks.h5"), "r") as h5_file:
        assert h5_file["masks"].shape[0] == 5
        assert h5_file.attrs["sequence"] == "toy"
        assert "producer" in h5_file.attrs


def test_track_errors(monkeypatch, tmp_path, toy_sequence_dir):
    missing = str(tmp_path / "missing")
    assert _exit_code(monkeypatch, "track", missing) == 2

    config = tmp_path / "tracker.yaml"
    config.write_text("psi: 2.0\n")
    assert _exit_code(
        monkeypatch, "track", toy_sequence_dir, "-c", str(config)
    ) == 1


def _corrupt_frame(sequence_dir: str) -> None:
    file = os.path.join(sequence_dir, "rgb", "r-1002-3.png")

    with open(file, "wb") as f:
        f.write(b"not an image")


def test_benchmark_sequence_returns_read_errors(toy_sequence_dir):
    _corrupt_frame(toy_sequence_dir)
    sequence = load_sequence(toy_sequence_dir)
    idx, name, result, metrics, error, code = benchmark_sequence(
        3, sequence, TrackerConfig()
    )

    assert (idx, name) == (3, "toy")
    assert code == EXIT_INGESTION
    assert "r-1002-3.png" in error
    assert metrics is None
    assert len(result) == 0


def test_benchmark_sequence_success(toy_sequence_dir):
    sequence = load_sequence(toy_sequence_dir)
    _, _, result, metrics, error, code = benchmark_sequence(
        0, sequence, TrackerConfig()
    )

    assert (error, code) == ("", 0)
    assert len(result) == 5
    assert metrics is not None


def test_bench_unreadable_frame(monkeypatch, tmp_path, toy_sequence_dir):
    _corrupt_frame(toy_sequence_dir)
    assert _exit_code(
        monkeypatch, "bench", os.path.dirname(toy_sequence_dir),
        "-o", str(tmp_path / "report.csv")
    ) == 2
