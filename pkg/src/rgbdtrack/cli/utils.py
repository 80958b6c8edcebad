import dataclasses
import os
import h5py
import numpy as np
from datetime import datetime
from importlib.metadata import version
from time import perf_counter
from typing import (
    Dict,
    List,
    Optional,
    Tuple
)
from ..core.config import get_producer_name
from ..core.exceptions import (
    EvaluationError,
    IngestionError,
    TrackingError
)
from ..data.metrics import (
    EvaluationMetrics,
    evaluate
)
from ..data.results import TrackResult
from ..data.sequences import Sequence
from ..tracking.config import TrackerConfig
from ..tracking.tracker import (
    init,
    track
)

# Exit codes
EXIT_USAGE = 1
EXIT_INGESTION = 2
EXIT_TRACKING = 3


def get_variants_map() -> Dict[str, dict]:
    """Mapping between tracker variants and the switches they set.

    Returns:
        dict: ``full`` uses depth masking and occlusion handling,
            ``occlusion`` only occlusion handling and ``plain`` neither.
    """
    return {
        "full": {"use_masking": True, "use_occlusion": True},
        "occlusion": {"use_masking": False, "use_occlusion": True},
        "plain": {"use_masking": False, "use_occlusion": False}
    }


def apply_variant(config: TrackerConfig, variant: str) -> TrackerConfig:
    return dataclasses.replace(config, **get_variants_map()[variant])


def uses_builtin_table(config: TrackerConfig) -> bool:
    """Whether tracking relies on the approximate built-in Color Names
    table.
    """
    return config.use_color_names and config.color_names_file is None


def get_producer() -> str:
    return f"{get_producer_name()} {version('rgbdtrack')}"


def run_sequence(
        sequence: Sequence,
        config: TrackerConfig,
        ctx: Optional[dict] = None,
        idx: int = 0,
        debug: Optional[dict] = None
) -> TrackResult:
    """Tracks the target through a whole sequence.

    Frames the tracker fails on report the previous box and are flagged in
    :attr:`TrackResult.failed`. Timings exclude disk I/O.

    Args:
        sequence (Sequence): Sequence to track.
        config (TrackerConfig): Tracker parameters.
        ctx (Optional[dict]): Context. If it holds a ``queue``, one
            ``(idx, 1)`` item is put per processed frame.
        idx (int): Sequence index reported through the queue.
        debug (Optional[dict]): If given, per-frame ``masks``,
            ``support_fraction``, ``occluded`` and ``response`` lists are
            appended to it.

    Returns:
        TrackResult: Per-frame output.

    Raises:
        TrackingError: If the tracker cannot be initialized.
    """
    queue = (ctx or {}).get("queue", None)
    result = TrackResult()
    state = None

    for i in range(len(sequence)):
        frame = sequence.read_frame(i)
        start = perf_counter()
        failed = False

        if state is None:
            try:
                state = init(frame, sequence.init_box, config)

            except Exception as e:
                raise TrackingError(
                    f"Tracker initialization failed on '{sequence.name}': {e}"
                ) from e

            box, occluded = sequence.init_box, False

        else:
            try:
                state, box, occluded = track(state, frame)

            except TrackingError:
                failed = True
                box = None if state.occluded else state.box
                occluded = state.occluded

        result.append(box, occluded, 1000.0 * (perf_counter() - start), failed)

        if debug is not None:
            debug.setdefault("masks", []).append(state.mask.values)
            debug.setdefault("support_fraction", []).append(
                state.mask.support_fraction
            )
            debug.setdefault("occluded", []).append(occluded)
            debug.setdefault("response", []).append(state.response)

        if queue is not None:
            queue.put((idx, 1))

    return result


def write_debug_masks(file: str, debug: dict, attrs: dict) -> str:
    """Writes the per-frame masks collected by :func:`run_sequence` to a
    `.h5` file.

    Masks are stored as one ``(frames, h_f, w_f)`` dataset; a mask grid
    changes size only when the tracker is restarted, which does not happen
    within a sequence.

    Args:
        file (str): Output `.h5` file.
        debug (dict): Collected debug lists.
        attrs (dict): Root attributes.

    Returns:
        str: The written file.
    """
    if os.path.dirname(file) != "":
        os.makedirs(os.path.dirname(file), exist_ok=True)

    with h5py.File(file, "w") as h5_file:
        h5_file.attrs["producer"] = get_producer()
        h5_file.attrs["creation_date"] = datetime.now().strftime(
            "%Y-%m-%d %H:%M:%S"
        )

        for k, v in attrs.items():
            h5_file.attrs[k] = v

        h5_file.create_dataset(
            "masks",
            data=np.stack(debug["masks"]).astype(np.uint8),
            compression="gzip"
        )
        h5_file.create_dataset(
            "support_fraction",
            data=np.asarray(debug["support_fraction"], dtype=np.float64)
        )
        h5_file.create_dataset(
            "occluded", data=np.asarray(debug["occluded"], dtype=bool)
        )
        h5_file.create_dataset(
            "response", data=np.asarray(debug["response"], dtype=np.float64)
        )

    return file


def benchmark_sequence(
        idx: int,
        sequence: Sequence,
        config: TrackerConfig,
        ctx: dict = {}
) -> Tuple[int, str, TrackResult, Optional[EvaluationMetrics], str, int]:
    """Tracks and scores one sequence. Runs inside a worker process.

    Failures are returned instead of raised so a single unreadable or
    untrackable sequence does not stop the benchmark.

    Returns:
        Tuple[int, str, TrackResult, Optional[EvaluationMetrics], str, int]:
            Sequence index and name, result, scores (``None`` without
            ground truth), an error message (empty on success) and the exit
            code of the error (``0`` on success).
    """
    try:
        result = run_sequence(sequence, config, ctx=ctx, idx=idx)

    except (IngestionError, OSError) as e:
        return idx, sequence.name, TrackResult(), None, str(e), EXIT_INGESTION

    except TrackingError as e:
        return idx, sequence.name, TrackResult(), None, str(e), EXIT_TRACKING

    metrics = None

    if sequence.ground_truth is not None:
        try:
            metrics = evaluate(
                result, sequence.ground_truth, sequence.category_tags
            )

        except EvaluationError as e:
            return idx, sequence.name, result, None, str(e), EXIT_TRACKING

    return idx, sequence.name, result, metrics, "", 0


def summarize_throughput(results: List[TrackResult]) -> float:
    """Mean FPS over all frames of several results."""
    total_ms = sum(sum(r.timing_ms) for r in results)
    frames = sum(len(r) for r in results)
    return 1000.0 * frames / total_ms if total_ms > 0 else 0.0
