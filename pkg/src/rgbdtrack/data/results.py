"""Tracking results in the Princeton submission format.

The result file has one ``x1,y1,x2,y2`` line of integer corners per frame
and ``NaN,NaN,NaN,NaN`` where the target is reported absent. A sidecar file
with the ``_time`` suffix holds ``milliseconds,occluded,failed`` per frame.
"""
from dataclasses import (
    dataclass,
    field
)
from typing import (
    List,
    Optional
)
from .sequences import read_boxes
from ..core.exceptions import IngestionError
from ..core.io import add_suffix
from ..tracking.imaging import BoundingBox

ABSENT_LINE = "NaN,NaN,NaN,NaN"


@dataclass
class TrackResult:
    """Per-frame tracker output.

    Attributes:
        boxes (List[Optional[BoundingBox]]): Reported box, ``None`` when the
            target is reported absent.
        occluded (List[bool]): Occlusion flag.
        timing_ms (List[float]): Processing time excluding disk I/O.
        failed (List[bool]): ``True`` for frames the tracker could not
            process. The previous box is reported for them.
    """
    boxes: List[Optional[BoundingBox]] = field(default_factory=list)
    occluded: List[bool] = field(default_factory=list)
    timing_ms: List[float] = field(default_factory=list)
    failed: List[bool] = field(default_factory=list)

    def __post_init__(self):
        if len(self.failed) == 0:
            self.failed = [False] * len(self.boxes)

        lengths = {
            len(self.boxes), len(self.occluded), len(self.timing_ms),
            len(self.failed)
        }

        if len(lengths) != 1:
            raise ValueError(
                "TrackResult fields must have one entry per frame"
            )

    def __len__(self) -> int:
        return len(self.boxes)

    def append(
            self,
            box: Optional[BoundingBox],
            occluded: bool,
            timing_ms: float,
            failed: bool = False
    ) -> None:
        self.boxes.append(box)
        self.occluded.append(bool(occluded))
        self.timing_ms.append(float(timing_ms))
        self.failed.append(bool(failed))

    @property
    def fps(self) -> float:
        """Mean frames per second over the processing times."""
        total = sum(self.timing_ms)
        return 1000.0 * len(self.timing_ms) / total if total > 0 else 0.0


def format_box(box: Optional[BoundingBox]) -> str:
    """Corner line of ``box``, e.g. ``(10, 20, 30, 40)`` gives
    ``10,20,40,60``.
    """
    if box is None:
        return ABSENT_LINE

    return ",".join(str(int(round(v))) for v in box.corners)


def write_result(result: TrackResult, path: str) -> None:
    """Writes the result file and its ``_time`` sidecar.

    Args:
        result (TrackResult): Tracker output.
        path (str): Result file.
    """
    with open(path, "w") as f:
        f.writelines(f"{format_box(box)}\n" for box in result.boxes)

    with open(add_suffix(path, "_time"), "w") as f:
        f.writelines(
            f"{t!r},{int(o)},{int(x)}\n"
            for t, o, x in zip(
                result.timing_ms, result.occluded, result.failed
            )
        )


def read_result(path: str) -> TrackResult:
    """Reads a result file written by :func:`write_result`.

    The ``_time`` sidecar is optional. Without it, frames with no box are
    taken as occluded and timings are zero.

    Args:
        path (str): Result file.

    Returns:
        TrackResult: The result.

    Raises:
        IngestionError: If either file is malformed.
    """
    boxes = read_boxes(path, corners=True)
    occluded = [b is None for b in boxes]
    timing = [0.0] * len(boxes)
    failed = [False] * len(boxes)

    try:
        with open(add_suffix(path, "_time"), "r") as f:
            rows = [line.strip().split(",") for line in f if line.strip()]

    except FileNotFoundError:
        return TrackResult(boxes, occluded, timing, failed)

    if len(rows) != len(boxes):
        raise IngestionError(
            f"Timing sidecar of '{path}' has {len(rows)} lines for "
            f"{len(boxes)} frames"
        )

    try:
        timing = [float(r[0]) for r in rows]
        occluded = [bool(int(r[1])) for r in rows]
        failed = [bool(int(r[2])) for r in rows]

    except (IndexError, ValueError) as e:
        raise IngestionError(f"Invalid timing sidecar of '{path}': {e}") from e

    return TrackResult(boxes, occluded, timing, failed)
