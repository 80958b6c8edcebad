import os
import numpy as np
from typing import (
    List,
    Tuple,
    Union
)
from .exceptions import (
    ConfigurationError,
    FileExtensionError,
    InvalidGeometryError
)


def has_ext(file: str, ext: Union[str, List[str]]) -> bool:
    """Returns `True` if a file has a certain extension (case insensitive).
    
    Args:
        file (str): File to check.
        ext (Union[str, List[str]]): Single extension to check as `str` or
            `list` of extensions to check.
    
    Returns:
        bool: `True` if `file` has one of the specified extensions, `False`
            otherwise.
    """
    ext = [ext] if not isinstance(ext, list) and ext is not None else ext
    _, ext_ = os.path.splitext(file)
    return ext_.lower() in ext


def has_ext_or_error(file: str, ext: Union[str, List[str]]) -> None:
    """Raises an exception if a file does not have an extension among a set
    of specified extensions.
    
    Args:
        file (str): File to check.
        ext (Union[str, List[str]]): Single extension to check as `str` or
            `list` of extensions to check.
    
    Raises:
        FileExtensionError: If `file` does not have any of the specified
            extensions.
    """
    if not has_ext(file, ext=ext):
        ext = [ext] if not isinstance(ext, list) else ext
        ext_repr = ", ".join([f"'{e}'" for e in ext])

        raise FileExtensionError(
            f"Invalid file extension of '{file}'. Expected file extensions: "
            f"{ext_repr}"
        )


def is_positive_size_or_error(size: Tuple[float, float], name: str) -> None:
    """Raises an exception if any component of a ``(w, h)`` size is not
    strictly positive.

    Args:
        size (Tuple[float, float]): Width and height.
        name (str): Name used in the error message.

    Raises:
        InvalidGeometryError: If a component is not strictly positive.
    """
    if len(size) != 2 or not all(np.isfinite(v) and v > 0 for v in size):
        raise InvalidGeometryError(
            f"{name} must have two positive components. Found {tuple(size)}"
        )


def is_divisible_or_error(shape: Tuple[int, ...], cell_size: int) -> None:
    """Raises an exception if a spatial shape cannot be split into whole
    cells.

    Args:
        shape (Tuple[int, ...]): Array shape whose first two entries are
            height and width.
        cell_size (int): Pixels per cell side.

    Raises:
        InvalidGeometryError: If either side is not a multiple of
            ``cell_size``.
    """
    if cell_size < 1 or shape[0] % cell_size or shape[1] % cell_size:
        raise InvalidGeometryError(
            f"Patch of shape {tuple(shape[:2])} is not divisible into cells "
            f"of {cell_size} pixels"
        )


def is_unit_interval_or_error(value: float, name: str) -> None:
    """Raises an exception if ``value`` lies outside ``[0, 1]``.

    Args:
        value (float): Value to check.
        name (str): Parameter name used in the error message.

    Raises:
        ConfigurationError: If ``value`` is not within ``[0, 1]``.
    """
    if not 0.0 <= value <= 1.0:
        raise ConfigurationError(
            f"'{name}' must be within [0, 1]. Found {value}"
        )
