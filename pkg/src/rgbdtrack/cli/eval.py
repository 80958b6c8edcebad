from argparse import Namespace
from ..core.display import (
    exit_error,
    print_table
)
from ..core.exceptions import (
    EvaluationError,
    IngestionError
)
from ..data.metrics import evaluate
from ..data.results import read_result
from ..data.sequences import read_boxes
from .utils import (
    EXIT_INGESTION,
    EXIT_TRACKING
)


def cmd_eval(args: Namespace) -> None:
    """Scores a result file against a ground truth file.

    Args:
        args (Namespace): User input arguments provided through the console.
    """
    try:
        result = read_result(args.result)
        truth = read_boxes(args.truth)

    except (IngestionError, OSError) as e:
        exit_error(str(e), code=EXIT_INGESTION)

    try:
        metrics = evaluate(result, truth)

    except EvaluationError as e:
        exit_error(str(e), code=EXIT_TRACKING)

    absent = sum(b is None for b in truth)
    print_table(
        "Evaluation",
        ["frames", "absent", "success", "mean_iou"],
        [(len(truth), absent, metrics.success, metrics.mean_iou)]
    )
    print(
        "Absent frames score 1 when the tracker reports no box and 0 "
        "otherwise (Princeton convention)"
    )
