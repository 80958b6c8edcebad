import os
from argparse import Namespace
from multiprocessing import (
    Manager,
    Pool
)
from queue import Empty
from time import perf_counter
from ..core.display import (
    exit_error,
    print_error,
    print_success,
    print_warning,
    make_progress_bar
)
from ..core.exceptions import (
    ConfigurationError,
    IngestionError
)
from ..core.utils import elapsed_to_str
from ..data import get_report_writers_map
from ..data.metrics import (
    overall_row,
    sequence_report,
    throughput_status
)
from ..data.results import write_result
from ..data.sequences import load_dataset
from ..data.validators import validate_config_file
from ..tracking.config import TrackerConfig
from .utils import (
    EXIT_INGESTION,
    EXIT_TRACKING,
    EXIT_USAGE,
    apply_variant,
    benchmark_sequence,
    summarize_throughput,
    uses_builtin_table
)


def cmd_bench(args: Namespace) -> None:
    """Tracks and scores every sequence of a dataset.

    Args:
        args (Namespace): User input arguments provided through the console.
    """
    # --------------------------------------------------------------------------
    # SECTION: LOAD CONFIGURATION AND DATASET
    # --------------------------------------------------------------------------
    # Assign workers equal to cpu cores if value is 0
    if args.workers == 0:
        args.workers = os.cpu_count()

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

    config = apply_variant(config, args.variant)

    try:
        sequences = load_dataset(
            args.input,
            depth_encoding=args.depth_encoding,
            category=args.filter
        )

    except (IngestionError, OSError) as e:
        exit_error(str(e), code=EXIT_INGESTION)

    if len(sequences) == 0:
        exit_error(
            f"No sequences with category '{args.filter}' in '{args.input}'",
            code=EXIT_INGESTION
        )

    print(
        f"Benchmarking {len(sequences)} sequence(s) with the "
        f"'{args.variant}' variant using {args.workers} worker(s) ..."
    )

    # --------------------------------------------------------------------------
    # SECTION: TRACK SEQUENCES
    # --------------------------------------------------------------------------
    manager = Manager()
    queue = manager.Queue()
    ctx = {"queue": queue}
    progress_bar = make_progress_bar()
    outputs = {}
    start_time = perf_counter()

    with progress_bar:
        task_ids = {
            idx: progress_bar.add_task(s.name, total=len(s))
            for idx, s in enumerate(sequences)
        }
        pool = Pool(processes=args.workers)
        jobs = [
            pool.apply_async(
                func=benchmark_sequence,
                args=(idx, sequence, config, ctx)
            )
            for idx, sequence in enumerate(sequences)
        ]

        while len(outputs) < len(jobs):
            try:
                idx, step = queue.get(timeout=0.1)
                progress_bar.update(task_ids[idx], advance=step)

            except Empty:
                pass

            for job_idx, job in enumerate(jobs):
                if job.ready() and job_idx not in outputs:
                    outputs[job_idx] = job.get()
                    progress_bar.remove_task(task_ids[job_idx])

        pool.close()
        pool.join()

    elapsed = perf_counter() - start_time

    # --------------------------------------------------------------------------
    # SECTION: REPORT
    # --------------------------------------------------------------------------
    results, metrics, failures = {}, {}, []

    for idx in sorted(outputs):
        _, name, result, scores, error, code = outputs[idx]

        if code != 0:
            print_error(f"'{name}': {error}")
            failures.append(code)
            continue

        results[name] = result

        if scores is None:
            print_warning(f"'{name}' has no ground truth and is not scored")

        else:
            metrics[name] = scores

        if args.results is not None:
            os.makedirs(args.results, exist_ok=True)
            write_result(result, os.path.join(args.results, f"{name}.txt"))

    if len(metrics) > 0:
        report = sequence_report(metrics, results)
        writer = get_report_writers_map()[args.report]
        files = writer(report, args.output)

        if files:
            print(f"Report saved to {', '.join(repr(f) for f in files)}")

        overall = overall_row(report)
        print(
            f"Overall success: {overall['success']:.3f} | Mean IOU: "
            f"{overall['mean_iou']:.3f} (absent frames scored per Princeton "
            "convention)"
        )

    fps = summarize_throughput(list(results.values()))
    status = throughput_status(fps)

    if status == "warning":
        print_warning(f"Mean throughput {fps:.1f} FPS is below 8 FPS")

    elif status == "failure":
        print_error(f"Mean throughput {fps:.1f} FPS is below 4 FPS")

    if len(failures) > 0:
        # Unreadable sequences take precedence over tracking failures
        exit_error(
            f"{len(failures)} sequence(s) could not be tracked",
            code=EXIT_INGESTION if EXIT_INGESTION in failures
            else EXIT_TRACKING
        )

    print_success(
        f"Benchmark completed in {elapsed_to_str(elapsed)} "
        f"({fps:.1f} FPS)"
    )
