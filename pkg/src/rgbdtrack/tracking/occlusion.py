"""Occlusion detection and full frame re-detection.

An occlusion is declared only when the peak response falls well below its
running mean and, at the same time, the depth mask finds little foreground
inside the box. While occluded, the frozen filter is evaluated over the
whole frame until a peak comparable to the recent responses shows up.
"""
import cv2
import numpy as np
from dataclasses import (
    dataclass,
    field
)
from scipy import fft
from typing import (
    NamedTuple,
    Optional,
    Tuple
)
from .colornames import ColorNamesTable
from .config import (
    FeatureConfig,
    OcclusionConfig
)
from .dcf import (
    FilterBank,
    respond
)
from .depth_mask import Mask
from .features import (
    compose,
    cosine_window
)
from .imaging import (
    BoundingBox,
    Frame,
    Patch,
    extract_patch
)
from ..core.exceptions import (
    HistoryNotReadyError,
    InvalidGeometryError,
    NumericalError
)


@dataclass(frozen=True)
class ResponseHistory:
    """Peak responses of the visible frames.

    Attributes:
        buffer (Tuple[float, ...]): Last ``capacity`` peaks, oldest first.
        running_mean (float): Incremental mean of every recorded peak.
        count (int): Number of recorded peaks.
        capacity (int): Buffer length.
    """
    buffer: Tuple[float, ...] = field(default_factory=tuple)
    running_mean: float = 0.0
    count: int = 0
    capacity: int = 100

    @property
    def buffer_mean(self) -> float:
        if len(self.buffer) == 0:
            raise HistoryNotReadyError("Response history is empty")

        return float(np.mean(self.buffer))

    @property
    def is_empty(self) -> bool:
        return self.count == 0


@dataclass(frozen=True)
class OcclusionState:
    occluded: bool = False
    frames_occluded: int = 0

    def __post_init__(self):
        if not self.occluded and self.frames_occluded != 0:
            raise ValueError("'frames_occluded' must be 0 while visible")


class Detection(NamedTuple):
    center: Tuple[float, float]
    r_max: float


def record_response(history: ResponseHistory, r_max: float) -> ResponseHistory:
    """Adds a peak response to ``history``.

    Args:
        history (ResponseHistory): Current history.
        r_max (float): Peak response of a visible frame.

    Returns:
        ResponseHistory: History with the updated running mean and buffer.

    Raises:
        NumericalError: If ``r_max`` is not finite.
    """
    if not np.isfinite(r_max):
        raise NumericalError(f"Non-finite peak response {r_max}")

    count = history.count + 1
    mean = history.running_mean + (r_max - history.running_mean) / count
    buffer = (history.buffer + (float(r_max),))[-history.capacity:]
    return ResponseHistory(buffer, mean, count, history.capacity)


def detect_occlusion(
        r_max: float,
        history: ResponseHistory,
        mask: Mask,
        config: OcclusionConfig
) -> bool:
    """Returns ``True`` if both the response and the depth support
    dropped.

    Raises:
        HistoryNotReadyError: If no response was recorded yet.
    """
    if history.is_empty:
        raise HistoryNotReadyError(
            "Occlusion cannot be tested before a response is recorded"
        )

    response_dropped = r_max < config.response_drop * history.running_mean
    support_lost = mask.support_fraction < config.depth_support_min
    return bool(response_dropped and support_lost)


def _frame_patch(frame: Frame, scale: float, cell_size: int) -> Patch:
    """Whole frame resampled by ``scale`` and padded to whole cells."""
    width = max(1, int(round(frame.width * scale)))
    height = max(1, int(round(frame.height * scale)))
    rgb = cv2.resize(
        frame.rgb.astype(np.float32),
        (width, height),
        interpolation=cv2.INTER_LINEAR
    )
    bottom = (-height) % cell_size
    right = (-width) % cell_size

    if bottom or right:
        rgb = cv2.copyMakeBorder(
            rgb, 0, bottom, 0, right, cv2.BORDER_REPLICATE
        )

    return Patch(
        pixels=rgb,
        depth=np.zeros(rgb.shape[:2], dtype=np.float32),
        origin=BoundingBox(0, 0, rgb.shape[1] / scale, rgb.shape[0] / scale)
    )


def _window_starts(length: int, window: int, stride: int) -> np.ndarray:
    starts = np.arange(0, length - window + 1, stride)

    if starts[-1] != length - window:
        starts = np.append(starts, length - window)

    return starts


def redetect(
        frame: Frame,
        bank: FilterBank,
        history: ResponseHistory,
        config: OcclusionConfig,
        feature_config: FeatureConfig,
        target_size: Tuple[float, float],
        padding: float,
        table: Optional[ColorNamesTable] = None
) -> Optional[Detection]:
    """Searches the whole frame for the target.

    The frame is resampled to the filter scale and its features are
    computed once. Template sized windows are evaluated on a grid whose
    stride is ``redetect_stride`` times the window side, then a regular
    search patch centered on the best coarse peak refines the location.

    Args:
        frame (Frame): Current frame.
        bank (FilterBank): Frozen filters.
        history (ResponseHistory): Responses of the visible frames.
        config (OcclusionConfig): Acceptance factor and stride.
        feature_config (FeatureConfig): Features the filters were trained
            on.
        target_size (Tuple[float, float]): Last known target ``(w, h)``.
        padding (float): Search region to target side ratio.
        table (Optional[ColorNamesTable]): Color Names table.

    Returns:
        Optional[Detection]: Target center and peak response if the peak
            exceeds ``tau`` times the mean of the buffered responses,
            ``None`` otherwise.

    Raises:
        InvalidGeometryError: If the frame is smaller than the search
            window.
        HistoryNotReadyError: If the history is empty.
    """
    cell_size = feature_config.cell_size
    rows, cols = bank.shape
    template = (cols * cell_size, rows * cell_size)
    scale = template[0] / (target_size[0] * padding)
    acceptance = config.tau * history.buffer_mean

    whole = _frame_patch(frame, scale, cell_size)
    features = compose(whole, feature_config, table=table, window=False)
    grid_rows, grid_cols = features.shape

    if grid_rows < rows or grid_cols < cols:
        raise InvalidGeometryError(
            f"Frame of {frame.width}x{frame.height} pixels is smaller than "
            f"the search window of {template[0] / scale:.0f}x"
            f"{template[1] / scale:.0f} pixels"
        )

    row_starts = _window_starts(
        grid_rows, rows, max(1, int(round(config.redetect_stride * rows)))
    )
    col_starts = _window_starts(
        grid_cols, cols, max(1, int(round(config.redetect_stride * cols)))
    )

    window = cosine_window((rows, cols))[..., None]
    weights = np.full(bank.num_channels, 1.0 / bank.num_channels)
    h_conj = np.conj(bank.h_hat)
    best_value, best_center = -np.inf, None

    for r in row_starts:
        # One batched transform per row of windows
        batch = np.stack(
            [
                features.channels[r:r + rows, c:c + cols] * window
                for c in col_starts
            ]
        )
        spectra = fft.rfft2(batch, axes=(1, 2))
        responses = fft.irfft2(
            (h_conj[None] * spectra) @ weights, s=(rows, cols), axes=(1, 2)
        )

        for k, c in enumerate(col_starts):
            peak = np.unravel_index(
                int(np.argmax(responses[k])), (rows, cols)
            )
            value = float(responses[k][peak])

            if value > best_value:
                dr = peak[0] - rows if peak[0] >= rows / 2.0 else peak[0]
                dc = peak[1] - cols if peak[1] >= cols / 2.0 else peak[1]
                best_value = value
                best_center = (
                    ((c + dc) * cell_size + template[0] / 2.0) / scale,
                    ((r + dr) * cell_size + template[1] / 2.0) / scale
                )

    patch = extract_patch(
        frame, best_center, target_size, padding, template
    )
    response = respond(
        bank, compose(patch, feature_config, table=table)
    )
    center, r_max = best_center, best_value

    if response.peak.value >= best_value:
        d_row, d_col = response.displacement
        sx, sy = patch.scale
        r_max = response.peak.value
        center = (
            best_center[0] + d_col * cell_size / sx,
            best_center[1] + d_row * cell_size / sy
        )

    if r_max > acceptance or config.tau == 0:
        return Detection(center, r_max)

    return None
