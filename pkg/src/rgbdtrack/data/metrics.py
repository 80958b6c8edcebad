"""Overlap metrics and benchmark reports.

Frames where both the result and the ground truth report the target as
absent score an overlap of 1, frames where only one of them does score 0.
This follows the Princeton benchmark, which credits trackers for correctly
declaring the target absent.
"""
import polars as pl
from dataclasses import (
    dataclass,
    field
)
from typing import (
    Dict,
    List,
    Optional,
    Sequence,
    Tuple
)
from .results import TrackResult
from ..core.config import get_fps_thresholds
from ..core.display import print_table
from ..core.exceptions import EvaluationError
from ..core.io import add_suffix
from ..tracking.imaging import (
    BoundingBox,
    iou
)

SUCCESS_OVERLAP = 0.5


@dataclass(frozen=True)
class EvaluationMetrics:
    """Scores of one sequence.

    Attributes:
        ious (Tuple[float, ...]): Per-frame overlap.
        success (float): Share of frames with overlap above 0.5.
        mean_iou (float): Mean overlap.
        category_tags (Tuple[str, ...]): Tags of the sequence.
    """
    ious: Tuple[float, ...]
    success: float
    mean_iou: float
    category_tags: Tuple[str, ...] = field(default_factory=tuple)


def frame_iou(
        result: Optional[BoundingBox],
        truth: Optional[BoundingBox]
) -> float:
    """Overlap of one frame, absent targets included."""
    if result is None and truth is None:
        return 1.0

    if result is None or truth is None:
        return 0.0

    return iou(result, truth)


def evaluate(
        result: TrackResult,
        truth: Sequence[Optional[BoundingBox]],
        category_tags: Sequence[str] = ()
) -> EvaluationMetrics:
    """Scores ``result`` against per-frame ground truth.

    Args:
        result (TrackResult): Tracker output.
        truth (Sequence[Optional[BoundingBox]]): Ground truth, ``None`` where
            the target is absent.
        category_tags (Sequence[str]): Tags carried into the report.

    Returns:
        EvaluationMetrics: The scores.

    Raises:
        EvaluationError: If the lengths differ or there are no frames.
    """
    if len(result.boxes) != len(truth):
        raise EvaluationError(
            f"Result has {len(result.boxes)} frames but ground truth has "
            f"{len(truth)}"
        )

    if len(truth) == 0:
        raise EvaluationError("Nothing to evaluate")

    ious = tuple(frame_iou(r, t) for r, t in zip(result.boxes, truth))
    success = sum(v > SUCCESS_OVERLAP for v in ious) / len(ious)
    return EvaluationMetrics(
        ious=ious,
        success=success,
        mean_iou=sum(ious) / len(ious),
        category_tags=tuple(category_tags)
    )


def sequence_report(
        metrics: Dict[str, EvaluationMetrics],
        results: Dict[str, TrackResult]
) -> pl.DataFrame:
    """One row per sequence with its scores, speed and occlusion share.

    Args:
        metrics (Dict[str, EvaluationMetrics]): Scores per sequence name.
        results (Dict[str, TrackResult]): Results per sequence name.

    Returns:
        pl.DataFrame: Columns ``name``, ``frames``, ``success``,
            ``mean_iou``, ``fps``, ``occluded``, ``failed`` and ``tags``.
    """
    names = sorted(metrics)
    return pl.DataFrame(
        {
            "name": names,
            "frames": [len(metrics[n].ious) for n in names],
            "success": [metrics[n].success for n in names],
            "mean_iou": [metrics[n].mean_iou for n in names],
            "fps": [results[n].fps for n in names],
            "occluded": [
                sum(results[n].occluded) / max(1, len(results[n]))
                for n in names
            ],
            "failed": [sum(results[n].failed) for n in names],
            "tags": [list(metrics[n].category_tags) for n in names]
        },
        schema_overrides={"tags": pl.List(pl.String)}
    )


def category_report(report: pl.DataFrame) -> pl.DataFrame:
    """Averages the per-sequence scores over each category tag.

    Sequences count once per tag they carry. Sequences without tags are not
    aggregated.
    """
    return (
        report.explode("tags")
        .drop_nulls("tags")
        .group_by("tags")
        .agg(
            pl.len().alias("sequences"),
            pl.col("success").mean(),
            pl.col("mean_iou").mean(),
            pl.col("fps").mean()
        )
        .rename({"tags": "category"})
        .sort("category")
    )


def overall_row(report: pl.DataFrame) -> Dict[str, float]:
    """Frame weighted success and overlap, and mean FPS, of a report."""
    frames = report["frames"].sum()
    return {
        "success": float(
            (report["success"] * report["frames"]).sum() / frames
        ),
        "mean_iou": float(
            (report["mean_iou"] * report["frames"]).sum() / frames
        ),
        "fps": float(report["fps"].mean())
    }


def throughput_status(fps: float) -> str:
    """``ok``, ``warning`` or ``failure`` for a frames per second value."""
    warning, failure = get_fps_thresholds()

    if fps < failure:
        return "failure"

    if fps < warning:
        return "warning"

    return "ok"


def write_report_csv(report: pl.DataFrame, file: str) -> List[str]:
    """Writes the per-sequence report and, when tags exist, the per
    category report next to it.

    Returns:
        List[str]: Written files.
    """
    report.with_columns(pl.col("tags").list.join(";")).write_csv(file)
    files = [file]
    categories = category_report(report)

    if categories.height > 0:
        categories_file = add_suffix(file, "_categories")
        categories.write_csv(categories_file)
        files.append(categories_file)

    return files


def show_report_table(report: pl.DataFrame) -> None:
    """Prints the per-sequence and per-category reports."""
    print_table(
        "Sequences",
        ["name", "frames", "success", "mean_iou", "fps", "occluded"],
        report.select(
            "name", "frames", "success", "mean_iou", "fps", "occluded"
        ).rows()
    )
    categories = category_report(report)

    if categories.height > 0:
        print_table(
            "Categories",
            ["category", "sequences", "success", "mean_iou", "fps"],
            categories.rows()
        )
