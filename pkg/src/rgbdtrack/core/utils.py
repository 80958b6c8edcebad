import hashlib
import numpy as np
from typing import (
    Any,
    Iterable,
    List
)


def make_list(x: Any) -> List[Any]:
    """If `x` is a single element, turns it into a `list` of one element.

    Args:
        x (Any): Element(s) to be returned as a `list`.

    Returns:
        (list): `x` as a `list`.
    """
    return [x] if not isinstance(x, list) and x is not None else x


def elapsed_to_str(seconds: float) -> str:
    """Formats a wall clock duration as e.g. ``850.0ms``, ``12.3s`` or
    ``1h 2m 5s``.
    """
    if seconds < 1.0:
        return f"{seconds * 1e3:.1f}ms"

    if seconds < 60.0:
        return f"{seconds:.1f}s"

    minutes, secs = divmod(int(seconds), 60)
    hours, minutes = divmod(minutes, 60)

    if hours:
        return f"{hours}h {minutes}m {secs}s"

    return f"{minutes}m {secs}s"


def get_arrays_checksum(
        arrays: Iterable[np.ndarray],
        hash: str = "sha256"
) -> str:
    """Computes a single checksum over the raw bytes of several arrays.

    Used to fingerprint tracker models, e.g. to verify that nothing is
    learned while the target is occluded.

    Args:
        arrays (Iterable[np.ndarray]): Arrays to hash, in order.
        hash (str): Hashing algorithm name.

    Returns:
        (str): Hex digest.
    """
    if hash not in hashlib.algorithms_available:
        raise ValueError(f"Invalid hash '{hash}'")

    hash_gen = hashlib.new(hash)

    for x in arrays:
        x = np.ascontiguousarray(x)
        hash_gen.update(str((x.dtype.str, x.shape)).encode("utf-8"))
        hash_gen.update(x.tobytes())

    return hash_gen.hexdigest()
