import os
import shutil
from argparse import Namespace
from ..core.display import (
    ask_confirmation,
    exit_error,
    print_success
)
from ..core.exceptions import (
    ConfigurationError,
    SyntheticSpecError
)
from ..data.synthetic import (
    generate_synthetic,
    write_categories
)
from ..data.validators import validate_synthetic_file
from .utils import (
    EXIT_INGESTION,
    EXIT_USAGE
)


def cmd_synth(args: Namespace) -> None:
    """Renders the synthetic sequences described by a `.yaml` file.

    Args:
        args (Namespace): User input arguments provided through the console.
    """
    try:
        specs = validate_synthetic_file(args.config)

    except (ConfigurationError, SyntheticSpecError) as e:
        exit_error(str(e), code=EXIT_USAGE)

    existing = [
        s.name for s in specs
        if os.path.exists(os.path.join(args.output, s.name))
    ]

    if len(existing) > 0 and not args.overwrite:
        if args.unattended or not ask_confirmation(
            f"{len(existing)} sequence folder(s) already exist in "
            f"'{args.output}'. Overwrite them? [y/n]:",
            exit=False
        ):
            exit_error(
                "Sequence folder(s) already exist. Use --overwrite to "
                "replace them",
                code=EXIT_USAGE
            )

    for name in existing:
        shutil.rmtree(os.path.join(args.output, name))

    os.makedirs(args.output, exist_ok=True)

    for spec in specs:
        try:
            sequence = generate_synthetic(spec, args.output, verbose=True)

        except SyntheticSpecError as e:
            exit_error(f"'{spec.name}': {e}", code=EXIT_USAGE)

        except OSError as e:
            exit_error(str(e), code=EXIT_INGESTION)

        print(f"Sequence '{sequence.name}' ({len(sequence)} frames) written")

    categories_file = write_categories(specs, args.output)

    if categories_file is not None:
        print(f"Categories saved to '{categories_file}'")

    print_success(f"{len(specs)} sequence(s) saved to '{args.output}'")
