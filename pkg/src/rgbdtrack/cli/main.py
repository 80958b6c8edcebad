import sys
import argparse
from datetime import datetime
from importlib.metadata import version
from ..core.config import get_depth_encodings
from ..core.display import exit_error
from ..data import get_report_writers_map
from .bench import cmd_bench
from .colornames import cmd_colornames
from .eval import cmd_eval
from .synth import cmd_synth
from .track import cmd_track
from .utils import (
    EXIT_USAGE,
    get_variants_map
)


class ArgumentParser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with code 1."""
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        exit_error(f"{self.prog}: {message}", code=EXIT_USAGE)


def get_parser() -> ArgumentParser:
    parser = ArgumentParser(
        description="track targets in RGBD sequences with depth masked "
                    "correlation filters",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        allow_abbrev=False
    )
    subparser = parser.add_subparsers(dest="action", required=True)

    # Track parser
    track_parser = subparser.add_parser(
        "track",
        description="track the target of one sequence",
        help="track the target of one sequence",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        allow_abbrev=False
    )
    track_parser.add_argument(
        "input",
        help="sequence folder (rgb/, depth/, init.txt and/or groundtruth.txt)"
    )
    track_parser.add_argument(
        "-c", "--config",
        type=str,
        help=".yaml tracker configuration file"
    )
    track_parser.add_argument(
        "-o", "--out",
        dest="output",
        type=str,
        default="results",
        help="output folder of the result file"
    )
    track_parser.add_argument(
        "--depth-encoding",
        type=str,
        choices=get_depth_encodings(),
        default="mm",
        help="depth PNG encoding"
    )
    track_parser.add_argument(
        "--debug-masks",
        action="store_true",
        help="save per-frame masks to a .h5 file next to the result"
    )

    # Bench parser
    bench_parser = subparser.add_parser(
        "bench",
        description="track and score every sequence of a dataset",
        help="track and score every sequence of a dataset",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        allow_abbrev=False
    )
    bench_parser.add_argument(
        "input",
        help="dataset root folder with one folder per sequence"
    )
    bench_parser.add_argument(
        "-c", "--config",
        type=str,
        help=".yaml tracker configuration file"
    )
    bench_parser.add_argument(
        "-f", "--filter",
        type=str,
        metavar="CATEGORY",
        help="only benchmark sequences tagged with this category"
    )
    bench_parser.add_argument(
        "-r", "--report",
        type=str,
        choices=list(get_report_writers_map()),
        default="table",
        help="report format"
    )
    bench_parser.add_argument(
        "-o", "--out",
        dest="output",
        type=str,
        default="report.csv",
        help="output .csv file of the csv report"
    )
    bench_parser.add_argument(
        "--results",
        type=str,
        help="folder where per-sequence result files are written"
    )
    bench_parser.add_argument(
        "--variant",
        type=str,
        choices=list(get_variants_map()),
        default="full",
        help="tracker variant"
    )
    bench_parser.add_argument(
        "--depth-encoding",
        type=str,
        choices=get_depth_encodings(),
        default="mm",
        help="depth PNG encoding"
    )
    bench_parser.add_argument(
        "-w", "--workers",
        type=int,
        default=1,
        help="number of workers (0 means 1 worker per core)"
    )

    # Synth parser
    synth_parser = subparser.add_parser(
        "synth",
        description="render synthetic RGBD sequences",
        help="render synthetic RGBD sequences",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        allow_abbrev=False
    )
    synth_parser.add_argument(
        "config",
        help=".yaml file describing the sequence(s)"
    )
    synth_parser.add_argument(
        "-o", "--out",
        dest="output",
        type=str,
        required=True,
        help="output dataset folder"
    )
    synth_parser.add_argument(
        "--overwrite",
        action="store_true",
        help="allow overwriting existing sequence folders"
    )
    synth_parser.add_argument(
        "-u", "--unattended",
        action="store_true",
        help="unattended mode (no user prompts)"
    )

    # Eval parser
    eval_parser = subparser.add_parser(
        "eval",
        description="score a result file against ground truth",
        help="score a result file against ground truth",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        allow_abbrev=False
    )
    eval_parser.add_argument(
        "result",
        help="result file (x1,y1,x2,y2 per line, NaN when absent)"
    )
    eval_parser.add_argument(
        "truth",
        help="ground truth file (x,y,w,h per line, NaN when absent)"
    )

    # Color names parser
    colornames_parser = subparser.add_parser(
        "colornames",
        description="write a binary Color Names lookup table",
        help="write a binary Color Names lookup table",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        allow_abbrev=False
    )
    colornames_parser.add_argument(
        "-o", "--out",
        dest="output",
        type=str,
        default="colornames.bin",
        help="output binary file"
    )
    colornames_parser.add_argument(
        "--from-mat",
        dest="mat_file",
        type=str,
        default=None,
        help="published MATLAB lookup to convert (w2c.mat)"
    )
    colornames_parser.add_argument(
        "--variable",
        type=str,
        default="w2c",
        help="name of the lookup matrix in the MATLAB file"
    )
    colornames_parser.add_argument(
        "--overwrite",
        action="store_true",
        help="allow overwriting an existing file"
    )

    return parser


def main() -> int:
    if (
        len(sys.argv) == 1
        or (len(sys.argv) == 2 and sys.argv[1] == "--version")
    ):
        print(
            f"rgbdtrack version {version('rgbdtrack')} "
            f"2025-{datetime.now().year}"
        )
        sys.exit(0)

    parser = get_parser()
    args = parser.parse_args()

    if args.action == "track":
        cmd_track(args)

    elif args.action == "bench":
        cmd_bench(args)

    elif args.action == "synth":
        cmd_synth(args)

    elif args.action == "eval":
        cmd_eval(args)

    elif args.action == "colornames":
        cmd_colornames(args)

    else:
        raise AssertionError

    return 0
