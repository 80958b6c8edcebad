import pytest
from rgbdtrack.core.exceptions import IngestionError
from rgbdtrack.data.results import (
    ABSENT_LINE,
    TrackResult,
    format_box,
    read_result,
    write_result
)
from rgbdtrack.tracking.imaging import BoundingBox


def _result() -> TrackResult:
    result = TrackResult()
    result.append(BoundingBox(10, 20, 30, 40), False, 12.5)
    result.append(None, True, 30.0)
    result.append(BoundingBox(10.4, 19.6, 30, 40), False, 7.5, failed=True)
    return result


def test_format_box():
    assert format_box(BoundingBox(10, 20, 30, 40)) == "10,20,40,60"
    assert format_box(BoundingBox(10.4, 19.6, 30.2, 40)) == "10,20,41,60"
    assert format_box(None) == ABSENT_LINE


def test_fps():
    assert _result().fps == pytest.approx(60.0)
    assert TrackResult().fps == 0.0


def test_field_lengths():
    with pytest.raises(ValueError):
        TrackResult(boxes=[None], occluded=[], timing_ms=[1.0])


def test_write_and_read(tmp_path):
    path = str(tmp_path / "seq.txt")
    write_result(_result(), path)

    lines = (tmp_path / "seq.txt").read_text().splitlines()
    assert lines == ["10,20,40,60", ABSENT_LINE, "10,20,40,60"]
    assert (tmp_path / "seq_time.txt").read_text().splitlines() == [
        "12.5,0,0", "30.0,1,0", "7.5,0,1"
    ]

    result = read_result(path)
    assert result.boxes[0] == BoundingBox(10, 20, 30, 40)
    assert result.boxes[1] is None
    assert result.occluded == [False, True, False]
    assert result.failed == [False, False, True]
    assert result.timing_ms == [12.5, 30.0, 7.5]


def test_read_without_sidecar(tmp_path):
    path = tmp_path / "seq.txt"
    path.write_text(f"10,20,40,60\n{ABSENT_LINE}\n")
    result = read_result(str(path))

    assert result.occluded == [False, True]
    assert result.timing_ms == [0.0, 0.0]


def test_malformed_sidecar(tmp_path):
    path = tmp_path / "seq.txt"
    path.write_text("10,20,40,60\n")
    (tmp_path / "seq_time.txt").write_text("1.0,0,0\n2.0,0,0\n")

    with pytest.raises(IngestionError, match="2 lines for 1 frames"):
        read_result(str(path))

    (tmp_path / "seq_time.txt").write_text("1.0,x\n")

    with pytest.raises(IngestionError):
        read_result(str(path))
