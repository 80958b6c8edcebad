import os
from argparse import Namespace
from time import perf_counter
from ..core.display import (
    exit_error,
    print_success,
    print_warning,
    make_progress_bar
)
from ..core.exceptions import (
    ConfigurationError,
    IngestionError,
    TrackingError
)
from ..core.utils import elapsed_to_str
from ..data.metrics import (
    evaluate,
    throughput_status
)
from ..data.results import write_result
from ..data.sequences import load_sequence
from ..data.validators import validate_config_file
from ..tracking.config import TrackerConfig
from .utils import (
    EXIT_INGESTION,
    EXIT_TRACKING,
    EXIT_USAGE,
    run_sequence,
    uses_builtin_table,
    write_debug_masks
)


class _ProgressQueue:
    """Minimal queue interface advancing a progress bar in-process."""
    def __init__(self, progress_bar, task_id):
        self.progress_bar = progress_bar
        self.task_id = task_id

    def put(self, item) -> None:
        self.progress_bar.advance(self.task_id, advance=item[1])


def cmd_track(args: Namespace) -> None:
    """Tracks the target of a single sequence and writes the result file.

    Args:
        args (Namespace): User input arguments provided through the console.
    """
    # --------------------------------------------------------------------------
    # SECTION: LOAD CONFIGURATION AND SEQUENCE
    # --------------------------------------------------------------------------
    try:
        config = (
            validate_config_file(args.config) if args.config is not None
            else TrackerConfig()
        )

    except ConfigurationError as e:
        exit_error(str(e), code=EXIT_USAGE)

    if uses_builtin_table(config):
        print_warning(
            "Using the approximate built-in Color Names table. Import the "
            "published one with 'rgbdtrack colornames --from-mat'"
        )

    try:
        sequence = load_sequence(
            args.input, depth_encoding=args.depth_encoding
        )

    except (IngestionError, OSError) as e:
        exit_error(str(e), code=EXIT_INGESTION)

    print(f"Tracking '{sequence.name}' ({len(sequence)} frames) ...")

    # --------------------------------------------------------------------------
    # SECTION: TRACK
    # --------------------------------------------------------------------------
    debug = {} if args.debug_masks else None
    progress_bar = make_progress_bar()
    start_time = perf_counter()

    with progress_bar:
        task_id = progress_bar.add_task(
            f"Tracking {sequence.name}", total=len(sequence)
        )
        ctx = {"queue": _ProgressQueue(progress_bar, task_id)}

        try:
            result = run_sequence(sequence, config, ctx=ctx, debug=debug)

        except TrackingError as e:
            exit_error(str(e), code=EXIT_TRACKING)

        except (IngestionError, OSError) as e:
            exit_error(str(e), code=EXIT_INGESTION)

    elapsed = perf_counter() - start_time

    # --------------------------------------------------------------------------
    # SECTION: WRITE RESULTS
    # --------------------------------------------------------------------------
    os.makedirs(args.output, exist_ok=True)
    result_file = os.path.join(args.output, f"{sequence.name}.txt")
    write_result(result, result_file)
    print(f"Result saved to '{result_file}'")

    if debug is not None:
        masks_file = write_debug_masks(
            os.path.join(args.output, f"{sequence.name}_masks.h5"),
            debug,
            attrs={"sequence": sequence.name}
        )
        print(f"Debug masks saved to '{masks_file}'")

    if any(result.failed):
        print_warning(
            f"{sum(result.failed)} frame(s) could not be tracked and report "
            "the previous box"
        )

    status = throughput_status(result.fps)

    if status != "ok":
        print_warning(f"Throughput {status}: {result.fps:.1f} FPS")

    if sequence.ground_truth is not None:
        metrics = evaluate(result, sequence.ground_truth)
        print(
            f"Success: {metrics.success:.3f} | Mean IOU: "
            f"{metrics.mean_iou:.3f} (absent frames scored per Princeton "
            "convention)"
        )

    print_success(
        f"Tracking completed in {elapsed_to_str(elapsed)} "
        f"({result.fps:.1f} FPS)"
    )
