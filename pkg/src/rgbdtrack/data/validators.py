import os
import yaml
from typing import (
    Any,
    Dict,
    List,
    Tuple
)
from .synthetic import SyntheticSpec
from ..core.config import get_allowed_config_extensions
from ..core.exceptions import (
    ConfigurationError,
    SyntheticSpecError
)
from ..core.guards import has_ext_or_error
from ..tracking.config import TrackerConfig


def _load_yaml(file: str) -> Any:
    """Reads a `.yaml` file.

    Raises:
        ConfigurationError: If the file is missing or cannot be parsed.
    """
    if not os.path.isfile(file):
        raise ConfigurationError(f"Configuration file not found: '{file}'")

    try:
        has_ext_or_error(file, get_allowed_config_extensions())

        with open(file, "r") as f:
            return yaml.safe_load(f)

    except Exception as e:
        raise ConfigurationError(
            f"Configuration file '{file}' could not be parsed: {e}"
        ) from e


def _config_types() -> Dict[str, Tuple[type, ...]]:
    """Accepted value types per configuration key, from the defaults."""
    nullable = {
        "mask_threshold": (int, float, type(None)),
        "color_names_file": (str, type(None)),
        "admm_debug_file": (str, type(None))
    }
    types = {}

    for key, value in TrackerConfig().to_dict().items():
        if key in nullable:
            types[key] = nullable[key]

        elif isinstance(value, bool):
            types[key] = (bool,)

        elif isinstance(value, float):
            types[key] = (int, float)

        else:
            types[key] = (type(value),)

    return types


def validate_config_dict(specs: Any, source: str = "config") -> TrackerConfig:
    """Validates a flat mapping of tracker parameters.

    Args:
        specs (Any): Parsed document.
        source (str): Name used in error messages.

    Returns:
        TrackerConfig: The configuration.

    Raises:
        ConfigurationError: Naming the offending key.
    """
    if specs is None:
        return TrackerConfig()

    if not isinstance(specs, dict):
        raise ConfigurationError(f"'{source}' must hold a key-value mapping")

    types = _config_types()

    for key, value in specs.items():
        if key not in types:
            raise ConfigurationError(f"Unknown key '{key}' in '{source}'")

        expected = types[key]

        # bool is an int, but not a valid number here
        wrong_bool = isinstance(value, bool) and bool not in expected

        if wrong_bool or not isinstance(value, expected):
            names = ", ".join(t.__name__ for t in expected)
            raise ConfigurationError(
                f"Key '{key}' in '{source}' must be of type {names}. Found "
                f"'{value.__class__.__name__}'"
            )

        if key == "scale_factors" and not all(
            isinstance(v, (int, float)) and not isinstance(v, bool)
            for v in value
        ):
            raise ConfigurationError(
                f"Key 'scale_factors' in '{source}' must be a list of numbers"
            )

    return TrackerConfig.from_dict(specs)


def validate_config_file(file: str) -> TrackerConfig:
    """Validates a tracker configuration file in `.yaml` format.

    Args:
        file (str): Configuration `.yaml` file with a flat mapping whose
            keys mirror the tracker parameters.

    Returns:
        TrackerConfig: The configuration.

    Raises:
        ConfigurationError: If the file cannot be read, a key is unknown or
            a value has the wrong type or range.
    """
    return validate_config_dict(_load_yaml(file), source=file)


def validate_synthetic_file(file: str) -> List[SyntheticSpec]:
    """Validates a synthetic sequence file in `.yaml` format.

    The document is either a single sequence mapping, or a mapping with a
    ``sequences`` list. Keys given next to ``sequences`` are defaults shared
    by every sequence.

    Args:
        file (str): Synthetic sequence `.yaml` file.

    Returns:
        List[SyntheticSpec]: One spec per sequence.

    Raises:
        ConfigurationError: If the file cannot be read.
        SyntheticSpecError: If a sequence is invalid.
    """
    specs = _load_yaml(file)

    if not isinstance(specs, dict):
        raise SyntheticSpecError(f"'{file}' must hold a key-value mapping")

    if "sequences" not in specs:
        return [SyntheticSpec.from_dict(specs)]

    defaults = {k: v for k, v in specs.items() if k != "sequences"}
    sequences = specs["sequences"]

    if not isinstance(sequences, list) or len(sequences) == 0:
        raise SyntheticSpecError(f"'sequences' of '{file}' must be a list")

    out = []

    for i, sequence in enumerate(sequences):
        if not isinstance(sequence, dict):
            raise SyntheticSpecError(
                f"Sequence {i} of '{file}' must be a key-value mapping"
            )

        values = {**defaults, **sequence}
        values.setdefault("name", f"synthetic_{i:03d}")
        out.append(SyntheticSpec.from_dict(values))

    names = [s.name for s in out]

    if len(set(names)) != len(names):
        raise SyntheticSpecError(f"Sequence names of '{file}' must be unique")

    return out
