import os
from argparse import Namespace
from ..core.display import (
    exit_error,
    print_success,
    print_warning
)
from ..core.exceptions import ConfigurationError
from ..tracking.colornames import (
    builtin_table,
    import_mat_table,
    save_table
)
from .utils import EXIT_USAGE


def cmd_colornames(args: Namespace) -> None:
    """Writes a binary Color Names lookup file.

    The table is converted from a published MATLAB file when ``--from-mat``
    is given, otherwise the approximate built-in table is exported.
    """
    if os.path.exists(args.output) and not args.overwrite:
        exit_error(
            f"'{args.output}' already exists. Use --overwrite to replace it",
            code=EXIT_USAGE
        )

    if args.mat_file is None:
        print_warning("Exporting the approximate built-in table")
        table = builtin_table()

    else:
        try:
            table = import_mat_table(args.mat_file, variable=args.variable)

        except ConfigurationError as e:
            exit_error(str(e), code=EXIT_USAGE)

    save_table(table, args.output)
    print_success(f"Color Names table saved to '{args.output}'")
