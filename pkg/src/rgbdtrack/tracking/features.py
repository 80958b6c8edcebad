"""Feature channels used for correlation: HOG, Color Names and gray."""
import numpy as np
from dataclasses import dataclass
from functools import lru_cache
from scipy.signal import windows
from typing import (
    Optional,
    Tuple
)
from .colornames import (
    ColorNamesTable,
    builtin_table,
    load_table
)
from .config import FeatureConfig
from .imaging import Patch
from ..core.guards import is_divisible_or_error

HOG_CHANNELS = 31
COLOR_NAMES_CHANNELS = 10
GRAY_CHANNELS = 1

_ORIENTATIONS = 18
_HOG_CLIP = 0.2
_HOG_EPS = 1e-4
_TEXTURE_WEIGHT = 0.2357


@dataclass(frozen=True, eq=False)
class FeatureStack:
    """Multi-channel features on the cell grid.

    Attributes:
        channels (np.ndarray): ``(h_f, w_f, C)`` real features.
        cell_size (int): Pixels per cell side.
        channel_labels (Tuple[str, ...]): Origin of each channel, one of
            ``hog``, ``cn`` or ``gray``.
    """
    channels: np.ndarray
    cell_size: int
    channel_labels: Tuple[str, ...]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.channels.shape[:2]

    @property
    def num_channels(self) -> int:
        return self.channels.shape[2]


def _cell_mean(values: np.ndarray, cell_size: int) -> np.ndarray:
    """Averages ``(H, W, C)`` values over non-overlapping cells."""
    h, w, c = values.shape
    return values.reshape(
        h // cell_size, cell_size, w // cell_size, cell_size, c
    ).mean(axis=(1, 3))


@lru_cache(maxsize=16)
def cosine_window(shape: Tuple[int, int]) -> np.ndarray:
    """Symmetric 2D Hann window, exactly zero on the border rows/cols."""
    win = np.outer(
        windows.hann(shape[0], sym=True), windows.hann(shape[1], sym=True)
    )
    win.setflags(write=False)
    return win


def _dominant_gradients(image: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Centered differences of the color channel with the largest gradient
    magnitude at each pixel.
    """
    padded = np.pad(image, ((1, 1), (1, 1), (0, 0)), mode="edge")
    dx = padded[1:-1, 2:] - padded[1:-1, :-2]
    dy = padded[2:, 1:-1] - padded[:-2, 1:-1]

    best = np.argmax(dx ** 2 + dy ** 2, axis=2)[..., None]
    dx = np.take_along_axis(dx, best, axis=2)[..., 0]
    dy = np.take_along_axis(dy, best, axis=2)[..., 0]
    return dx, dy


def extract_hog(patch: Patch, cell_size: int) -> FeatureStack:
    """Computes the 31 channel HOG variant.

    Channels are 18 contrast sensitive orientations, 9 contrast insensitive
    orientations and 4 texture energies. Every pixel votes its gradient
    magnitude into the orientation bin nearest to its gradient direction,
    within its own cell. Each cell histogram is normalized by the energy of
    the four 2x2 cell blocks it belongs to, truncated at 0.2 and summed over
    the four normalizations.

    Args:
        patch (Patch): Input patch.
        cell_size (int): Pixels per cell side.

    Returns:
        FeatureStack: ``(h / cell_size, w / cell_size, 31)`` features.

    Raises:
        InvalidGeometryError: If the patch is not divisible into cells.
    """
    is_divisible_or_error(patch.shape, cell_size)
    height, width = patch.shape
    hc, wc = height // cell_size, width // cell_size

    dx, dy = _dominant_gradients(patch.pixels.astype(np.float64) / 255.0)
    magnitude = np.sqrt(dx ** 2 + dy ** 2)
    angle = np.mod(np.arctan2(dy, dx), 2.0 * np.pi)
    bins = np.mod(
        np.round(angle / (2.0 * np.pi / _ORIENTATIONS)).astype(np.intp),
        _ORIENTATIONS
    )

    rows = np.arange(height)[:, None] // cell_size
    cols = np.arange(width)[None, :] // cell_size
    flat = ((rows * wc + cols) * _ORIENTATIONS + bins).ravel()
    hist = np.bincount(
        flat, weights=magnitude.ravel(), minlength=hc * wc * _ORIENTATIONS
    ).reshape(hc, wc, _ORIENTATIONS)
    half = _ORIENTATIONS // 2
    hist_insensitive = hist[..., :half] + hist[..., half:]

    # Energy of every 2x2 block, S[a, b] covers cells (a-1..a, b-1..b)
    energy = np.pad(
        (hist_insensitive ** 2).sum(axis=2), 1, mode="edge"
    )
    blocks = (
        energy[:-1, :-1] + energy[1:, :-1] + energy[:-1, 1:] + energy[1:, 1:]
    )
    norms = [
        1.0 / np.sqrt(blocks[dr:dr + hc, dc:dc + wc] + _HOG_EPS)
        for dr in (0, 1) for dc in (0, 1)
    ]

    sensitive = np.zeros((hc, wc, _ORIENTATIONS))
    insensitive = np.zeros((hc, wc, half))
    texture = np.zeros((hc, wc, 4))

    for k, n in enumerate(norms):
        clipped = np.minimum(hist * n[..., None], _HOG_CLIP)
        sensitive += clipped
        insensitive += np.minimum(
            hist_insensitive * n[..., None], _HOG_CLIP
        )
        texture[..., k] = _TEXTURE_WEIGHT * clipped.sum(axis=2)

    channels = np.concatenate(
        [0.5 * sensitive, 0.5 * insensitive, texture], axis=2
    )
    return FeatureStack(
        channels=channels,
        cell_size=cell_size,
        channel_labels=("hog",) * HOG_CHANNELS
    )


def extract_color_names(
        patch: Patch,
        table: ColorNamesTable,
        cell_size: int
) -> FeatureStack:
    """Per-cell mean Color Names probabilities (10 channels).

    Args:
        patch (Patch): Input patch.
        table (ColorNamesTable): Lookup table.
        cell_size (int): Pixels per cell side.

    Returns:
        FeatureStack: ``(h / cell_size, w / cell_size, 10)`` features.
    """
    is_divisible_or_error(patch.shape, cell_size)
    probabilities = table(patch.pixels).astype(np.float64)
    return FeatureStack(
        channels=_cell_mean(probabilities, cell_size),
        cell_size=cell_size,
        channel_labels=("cn",) * COLOR_NAMES_CHANNELS
    )


def extract_gray(patch: Patch, cell_size: int) -> FeatureStack:
    """Per-cell mean intensity shifted to ``[-0.5, 0.5]``."""
    is_divisible_or_error(patch.shape, cell_size)
    rgb = patch.pixels.astype(np.float64)
    gray = (
        0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]
    ) / 255.0 - 0.5
    return FeatureStack(
        channels=_cell_mean(gray[..., None], cell_size),
        cell_size=cell_size,
        channel_labels=("gray",) * GRAY_CHANNELS
    )


def get_table(config: FeatureConfig) -> ColorNamesTable:
    """Returns the configured Color Names table."""
    if config.color_names_file is None:
        return builtin_table()

    return load_table(config.color_names_file)


def num_channels(config: FeatureConfig) -> int:
    """Number of channels :func:`compose` produces for ``config``."""
    return (
        HOG_CHANNELS * config.use_hog
        + COLOR_NAMES_CHANNELS * config.use_color_names
        + GRAY_CHANNELS * config.use_gray
    )


def compose(
        patch: Patch,
        config: FeatureConfig,
        table: Optional[ColorNamesTable] = None,
        window: bool = True
) -> FeatureStack:
    """Concatenates the selected features and applies the Hann window.

    Args:
        patch (Patch): Input patch.
        config (FeatureConfig): Feature selection.
        table (Optional[ColorNamesTable]): Color Names table. Resolved from
            ``config`` when not given.
        window (bool): If ``False`` the cosine window is not applied. Used by
            full frame re-detection, which windows each search window itself.

    Returns:
        FeatureStack: Windowed features.

    Raises:
        InvalidGeometryError: If the patch is not divisible into cells.
        ConfigurationError: If the configured Color Names table is missing.
    """
    stacks = []

    if config.use_hog:
        stacks.append(extract_hog(patch, config.cell_size))

    if config.use_color_names:
        table = get_table(config) if table is None else table
        stacks.append(
            extract_color_names(patch, table, config.cell_size)
        )

    if config.use_gray:
        stacks.append(extract_gray(patch, config.cell_size))

    channels = np.concatenate([s.channels for s in stacks], axis=2)

    if window:
        channels = channels * cosine_window(channels.shape[:2])[..., None]

    labels = tuple(label for s in stacks for label in s.channel_labels)
    return FeatureStack(
        channels=channels,
        cell_size=config.cell_size,
        channel_labels=labels
    )
