import polars as pl
import pytest
from rgbdtrack.core.exceptions import EvaluationError
from rgbdtrack.data.metrics import (
    category_report,
    evaluate,
    frame_iou,
    overall_row,
    sequence_report,
    throughput_status,
    write_report_csv
)
from rgbdtrack.data.results import TrackResult
from rgbdtrack.tracking.imaging import BoundingBox

BOX = BoundingBox(0, 0, 10, 10)
HALF = BoundingBox(5, 0, 10, 10)


def _result(boxes, ms: float = 100.0) -> TrackResult:
    return TrackResult(
        boxes=list(boxes),
        occluded=[b is None for b in boxes],
        timing_ms=[ms] * len(boxes)
    )


def test_frame_iou_absent_convention():
    assert frame_iou(None, None) == 1.0
    assert frame_iou(BOX, None) == 0.0
    assert frame_iou(None, BOX) == 0.0
    assert frame_iou(BOX, HALF) == pytest.approx(1.0 / 3.0)


def test_evaluate():
    metrics = evaluate(
        _result([BOX, HALF, None, BOX]), [BOX, BOX, None, None], ("rigid",)
    )

    assert metrics.ious == pytest.approx((1.0, 1.0 / 3.0, 1.0, 0.0))
    assert metrics.success == 0.5
    assert metrics.mean_iou == pytest.approx((2.0 + 1.0 / 3.0) / 4.0)
    assert metrics.category_tags == ("rigid",)


def test_evaluate_errors():
    with pytest.raises(EvaluationError):
        evaluate(_result([BOX]), [BOX, BOX])

    with pytest.raises(EvaluationError):
        evaluate(_result([]), [])


def _report() -> pl.DataFrame:
    results = {
        "a": _result([BOX, BOX], ms=50.0),
        "b": _result([BOX, None, None, HALF], ms=200.0)
    }
    metrics = {
        "a": evaluate(results["a"], [BOX, BOX], ("rigid", "slow")),
        "b": evaluate(results["b"], [BOX, None, BOX, BOX], ("rigid",))
    }
    return sequence_report(metrics, results)


def test_sequence_report():
    report = _report()

    assert report["name"].to_list() == ["a", "b"]
    assert report["frames"].to_list() == [2, 4]
    assert report["success"].to_list() == [1.0, 0.5]
    assert report["fps"].to_list() == pytest.approx([20.0, 5.0])
    assert report["occluded"].to_list() == [0.0, 0.5]


def test_category_report():
    categories = category_report(_report())

    assert categories["category"].to_list() == ["rigid", "slow"]
    assert categories["sequences"].to_list() == [2, 1]
    assert categories["success"].to_list() == pytest.approx([0.75, 1.0])


def test_overall_row():
    row = overall_row(_report())

    # Frame weighted: (2 * 1.0 + 4 * 0.5) / 6
    assert row["success"] == pytest.approx(4.0 / 6.0)
    assert row["fps"] == pytest.approx(12.5)


def test_throughput_status():
    assert throughput_status(30.0) == "ok"
    assert throughput_status(8.0) == "ok"
    assert throughput_status(6.0) == "warning"
    assert throughput_status(7.99) == "warning"
    assert throughput_status(4.0) == "warning"
    assert throughput_status(3.9) == "failure"


def test_write_report_csv(tmp_path):
    file = str(tmp_path / "report.csv")
    files = write_report_csv(_report(), file)

    assert files == [file, str(tmp_path / "report_categories.csv")]
    df = pl.read_csv(file)
    assert df["tags"].to_list() == ["rigid;slow", "rigid"]
