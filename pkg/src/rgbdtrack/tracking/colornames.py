"""Color Names lookup tables.

A table maps every quantized RGB triplet ``(r // 8, g // 8, b // 8)`` to a
probability vector over 10 color names. On disk it is a little-endian
``float32`` array of ``32768 x 10`` values, row-major over ``(r_q, g_q, b_q)``
(row index ``r_q * 1024 + g_q * 32 + b_q``).

The built-in table is a smooth approximation computed from one sRGB
prototype per name. The learned table published with the Color Names
features is distributed as a MATLAB ``w2c.mat`` file and can be converted
with :func:`import_mat_table`.
"""
import os
import h5py
import numpy as np
from dataclasses import dataclass
from functools import lru_cache
from scipy import io as sio
from ..core.exceptions import ConfigurationError

COLOR_NAMES = (
    "black",
    "blue",
    "brown",
    "green",
    "orange",
    "pink",
    "purple",
    "red",
    "white",
    "yellow"
)

# sRGB prototypes of the built-in table, same order as COLOR_NAMES
_PROTOTYPES = np.array(
    [
        [0, 0, 0],
        [0, 0, 255],
        [139, 69, 19],
        [0, 128, 0],
        [255, 165, 0],
        [255, 192, 203],
        [128, 0, 128],
        [255, 0, 0],
        [255, 255, 255],
        [255, 255, 0]
    ],
    dtype=np.float64
)
_PROTOTYPE_SIGMA = 48.0
_LEVELS = 32
_STEP = 256 // _LEVELS
_TABLE_DTYPE = np.dtype("<f4")

# Name order of the published 11 name table
MAT_COLOR_NAMES = (
    "black",
    "blue",
    "brown",
    "grey",
    "green",
    "orange",
    "pink",
    "purple",
    "red",
    "white",
    "yellow"
)


@dataclass(frozen=True, eq=False)
class ColorNamesTable:
    """Quantized RGB to color name probabilities.

    Attributes:
        lookup (np.ndarray): ``(32768, 10)`` ``float32`` rows summing to 1.
    """
    lookup: np.ndarray

    def __post_init__(self):
        if self.lookup.shape != (_LEVELS ** 3, len(COLOR_NAMES)):
            raise ConfigurationError(
                "Color Names table must have shape "
                f"{(_LEVELS ** 3, len(COLOR_NAMES))}. Found "
                f"{self.lookup.shape}"
            )

        if not np.allclose(self.lookup.sum(axis=1), 1.0, atol=1e-3):
            raise ConfigurationError(
                "Every Color Names table row must sum to 1"
            )

    def __call__(self, pixels: np.ndarray) -> np.ndarray:
        """Maps ``(..., 3)`` RGB values in ``[0, 255]`` to ``(..., 10)``
        probabilities.
        """
        return self.lookup[table_index(pixels)]


def table_index(pixels: np.ndarray) -> np.ndarray:
    """Row index of each ``(..., 3)`` RGB value."""
    q = np.clip(np.floor(pixels / _STEP), 0, _LEVELS - 1).astype(np.intp)
    return q[..., 0] * _LEVELS * _LEVELS + q[..., 1] * _LEVELS + q[..., 2]


@lru_cache(maxsize=1)
def builtin_table() -> ColorNamesTable:
    """Returns the approximate table shipped with the package.

    Each bin center is assigned a softmax over its negative squared RGB
    distances to the 10 color prototypes. Dominant names agree with the
    learned table on saturated colors but the probabilities do not, so
    results obtained with it are not comparable to published ones.
    """
    centers = np.arange(_LEVELS, dtype=np.float64) * _STEP + _STEP / 2.0
    r, g, b = np.meshgrid(centers, centers, centers, indexing="ij")
    rgb = np.stack([r, g, b], axis=-1).reshape(-1, 3)

    d2 = ((rgb[:, None, :] - _PROTOTYPES[None, :, :]) ** 2).sum(axis=-1)
    logits = -d2 / (2.0 * _PROTOTYPE_SIGMA ** 2)
    logits -= logits.max(axis=1, keepdims=True)
    p = np.exp(logits)
    p /= p.sum(axis=1, keepdims=True)

    return ColorNamesTable(p.astype(np.float32))


@lru_cache(maxsize=4)
def load_table(file: str) -> ColorNamesTable:
    """Loads a binary Color Names table.

    Args:
        file (str): Path to the table file.

    Returns:
        ColorNamesTable: The table.

    Raises:
        ConfigurationError: If the file is missing or has the wrong size.
    """
    if not os.path.isfile(file):
        raise ConfigurationError(f"Color Names table not found: '{file}'")

    data = np.fromfile(file, dtype=_TABLE_DTYPE)
    expected = _LEVELS ** 3 * len(COLOR_NAMES)

    if data.size != expected:
        raise ConfigurationError(
            f"Color Names table '{file}' holds {data.size} values, expected "
            f"{expected}"
        )

    return ColorNamesTable(
        data.reshape(_LEVELS ** 3, len(COLOR_NAMES)).astype(np.float32)
    )


def save_table(table: ColorNamesTable, file: str) -> None:
    """Writes ``table`` in the binary layout read by :func:`load_table`."""
    table.lookup.astype(_TABLE_DTYPE).tofile(file)


def _read_mat_variable(file: str, variable: str) -> np.ndarray:
    try:
        data = sio.loadmat(file, variable_names=[variable])

    except NotImplementedError:
        # Version 7.3 files are HDF5 and store matrices transposed
        with h5py.File(file, "r") as f:
            if variable not in f:
                raise ConfigurationError(
                    f"Variable '{variable}' not found in '{file}'"
                ) from None

            return np.asarray(f[variable], dtype=np.float64).T

    except (OSError, ValueError) as e:
        raise ConfigurationError(
            f"Cannot read MATLAB file '{file}': {e}"
        ) from e

    if variable not in data:
        raise ConfigurationError(
            f"Variable '{variable}' not found in '{file}'"
        )

    return np.asarray(data[variable], dtype=np.float64)


def convert_mat_lookup(lookup: np.ndarray) -> ColorNamesTable:
    """Converts a lookup in the published MATLAB layout.

    MATLAB rows are indexed by ``r_q + 32 * g_q + 1024 * b_q`` and columns
    follow :data:`MAT_COLOR_NAMES`. The ``grey`` probability is split
    evenly between ``black`` and ``white``. A ``32768 x 10`` lookup is taken
    to be in :data:`COLOR_NAMES` order already.

    Raises:
        ConfigurationError: If the shape is not ``32768 x 11`` or
            ``32768 x 10``.
    """
    rows = _LEVELS ** 3
    shapes = {(rows, len(COLOR_NAMES)), (rows, len(MAT_COLOR_NAMES))}

    if lookup.shape not in shapes:
        raise ConfigurationError(
            f"MATLAB Color Names lookup must have shape ({rows}, "
            f"{len(MAT_COLOR_NAMES)}) or ({rows}, {len(COLOR_NAMES)}). "
            f"Found {lookup.shape}"
        )

    r, g, b = np.unravel_index(np.arange(rows), (_LEVELS,) * 3)
    lookup = lookup[r + _LEVELS * g + _LEVELS * _LEVELS * b]

    if lookup.shape[1] == len(MAT_COLOR_NAMES):
        grey = lookup[:, MAT_COLOR_NAMES.index("grey")]
        lookup = lookup[
            :, [MAT_COLOR_NAMES.index(name) for name in COLOR_NAMES]
        ]
        lookup[:, COLOR_NAMES.index("black")] += grey / 2.0
        lookup[:, COLOR_NAMES.index("white")] += grey / 2.0

    lookup = np.clip(lookup, 0.0, None)
    lookup /= lookup.sum(axis=1, keepdims=True)

    return ColorNamesTable(lookup.astype(np.float32))


def import_mat_table(file: str, variable: str = "w2c") -> ColorNamesTable:
    """Reads the published ``w2c.mat`` Color Names lookup.

    Args:
        file (str): MATLAB file, version 5 or 7.3.
        variable (str): Name of the lookup matrix.

    Returns:
        ColorNamesTable: The converted table. See :func:`convert_mat_lookup`.

    Raises:
        ConfigurationError: If the file is missing, unreadable or holds no
            usable lookup.
    """
    if not os.path.isfile(file):
        raise ConfigurationError(f"MATLAB file not found: '{file}'")

    return convert_mat_lookup(_read_mat_variable(file, variable))
