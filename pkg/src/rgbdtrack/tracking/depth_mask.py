"""Depth based foreground segmentation of the search region.

Foreground and background depths are modeled with one Gaussian each. Every
pixel gets the log ratio of both densities and the ratio image is split with
Otsu's method (or a fixed ratio threshold), giving the binary mask that
constrains the spatial support of the filters.
"""
import numpy as np
from dataclasses import dataclass
from typing import (
    Optional,
    Tuple
)
from .imaging import (
    BoundingBox,
    Patch
)
from ..core.exceptions import (
    DegenerateInputError,
    DepthInitializationError,
    InvalidGeometryError
)
from ..core.guards import is_unit_interval_or_error

# (row0, col0, row1, col1), end exclusive
Region = Tuple[int, int, int, int]

_OTSU_BINS = 256
_OTSU_MIN_RANGE = 1e-6
# Background spread, relative to the foreground, when no background is seen
_BG_PRIOR_SPREAD = 10.0


@dataclass(frozen=True)
class DepthModel:
    """Foreground and background depth Gaussians (millimeters).

    Both standard deviations are floored at ``sigma_min`` on construction.
    """
    mu_fg: float
    sigma_fg: float
    mu_bg: float
    sigma_bg: float
    theta: float = 0.95
    gamma: float = 0.20
    sigma_min: float = 20.0

    def __post_init__(self):
        is_unit_interval_or_error(self.theta, "theta")
        is_unit_interval_or_error(self.gamma, "gamma")
        object.__setattr__(
            self, "sigma_fg", max(float(self.sigma_fg), self.sigma_min)
        )
        object.__setattr__(
            self, "sigma_bg", max(float(self.sigma_bg), self.sigma_min)
        )


@dataclass(frozen=True, eq=False)
class Mask:
    """Binary mask on the feature cell grid.

    Attributes:
        values (np.ndarray): ``(h_f, w_f)`` ``uint8`` array of 0/1.
        support_fraction (float): Share of active cells inside ``region``.
        region (Region): Bounding box cells within the grid.
    """
    values: np.ndarray
    support_fraction: float
    region: Region

    @classmethod
    def from_values(cls, values: np.ndarray, region: Region) -> "Mask":
        values = (np.asarray(values) > 0).astype(np.uint8)
        r0, c0, r1, c1 = region
        box = values[r0:r1, c0:c1]
        support = float(box.mean()) if box.size > 0 else 0.0
        return cls(values, support, region)

    @classmethod
    def full(cls, shape: Tuple[int, int], region: Region) -> "Mask":
        """All-ones mask."""
        return cls.from_values(np.ones(shape, dtype=np.uint8), region)

    @property
    def active_cells(self) -> int:
        return int(self.values.sum())


def box_region(patch: Patch, box: BoundingBox) -> Region:
    """Pixel region of ``box`` inside ``patch``, clipped to the patch."""
    sx, sy = patch.scale
    h, w = patch.shape

    def _round(v: float) -> int:
        return int(np.floor(v + 0.5))

    c0 = _round((box.x - patch.origin.x) * sx)
    r0 = _round((box.y - patch.origin.y) * sy)
    c1 = _round((box.x + box.w - patch.origin.x) * sx)
    r1 = _round((box.y + box.h - patch.origin.y) * sy)

    r0, r1 = max(0, min(r0, h - 1)), max(1, min(r1, h))
    c0, c1 = max(0, min(c0, w - 1)), max(1, min(c1, w))

    if r1 <= r0 or c1 <= c0:
        raise InvalidGeometryError(
            f"Box {box} does not overlap the patch {patch.origin}"
        )

    return (r0, c0, r1, c1)


def cell_region(region: Region, cell_size: int) -> Region:
    """Maps a pixel region to the cell grid, keeping at least one cell."""
    r0, c0, r1, c1 = (int(np.floor(v / cell_size + 0.5)) for v in region)
    return (r0, c0, max(r1, r0 + 1), max(c1, c0 + 1))


def _region_mask(shape: Tuple[int, int], region: Region) -> np.ndarray:
    inside = np.zeros(shape, dtype=bool)
    r0, c0, r1, c1 = region
    inside[r0:r1, c0:c1] = True
    return inside


def init_model(
        patch: Patch,
        region: Region,
        theta: float = 0.95,
        gamma: float = 0.20,
        sigma_min: float = 20.0
) -> DepthModel:
    """Estimates both distributions from the initial box.

    Args:
        patch (Patch): Search region around the initial box.
        region (Region): Pixel region of the box inside ``patch``.
        theta (float): Mean update rate.
        gamma (float): Standard deviation update rate.
        sigma_min (float): Standard deviation floor.

    Returns:
        DepthModel: Foreground from the valid depths inside the box,
            background from the valid depths around it. A wide background
            centered on the foreground is used if no background depth is
            valid.

    Raises:
        DepthInitializationError: If the box holds no valid depth.
    """
    valid = patch.depth > 0
    inside = _region_mask(patch.shape, region)
    fg = patch.depth[inside & valid].astype(np.float64)
    bg = patch.depth[~inside & valid].astype(np.float64)

    if fg.size == 0:
        raise DepthInitializationError(
            "No valid depth inside the initial bounding box"
        )

    mu_fg, sigma_fg = float(fg.mean()), float(fg.std())

    if bg.size == 0:
        mu_bg = mu_fg
        sigma_bg = _BG_PRIOR_SPREAD * max(sigma_fg, sigma_min)

    else:
        mu_bg, sigma_bg = float(bg.mean()), float(bg.std())

    return DepthModel(
        mu_fg, sigma_fg, mu_bg, sigma_bg,
        theta=theta, gamma=gamma, sigma_min=sigma_min
    )


def _log_gaussian(d: np.ndarray, mu: float, sigma: float) -> np.ndarray:
    return -0.5 * ((d - mu) / sigma) ** 2 - np.log(sigma)


def probability_ratio_image(
        patch: Patch,
        model: DepthModel,
        ratio_clip: Optional[float] = 20.0
) -> np.ndarray:
    """Per-pixel ``log P_fg(d) - log P_bg(d)``.

    Args:
        patch (Patch): Search region.
        model (DepthModel): Depth distributions.
        ratio_clip (Optional[float]): Values are clipped to
            ``[-ratio_clip, ratio_clip]``. No clipping when ``None``.

    Returns:
        np.ndarray: ``(h_p, w_p)`` ratios, ``0`` where depth is missing.
    """
    d = patch.depth.astype(np.float64)
    ratio = (
        _log_gaussian(d, model.mu_fg, model.sigma_fg)
        - _log_gaussian(d, model.mu_bg, model.sigma_bg)
    )
    ratio[d <= 0] = 0.0

    if ratio_clip is not None:
        np.clip(ratio, -ratio_clip, ratio_clip, out=ratio)

    return ratio


def otsu_threshold(image: np.ndarray) -> float:
    """Threshold maximizing the between-class variance of a 256 bin
    histogram over the value range of ``image``.

    When several bin boundaries reach the maximum, the middle one is used.

    Args:
        image (np.ndarray): Real values.

    Returns:
        float: The threshold, a histogram bin edge.

    Raises:
        DegenerateInputError: If the value range is below ``1e-6``.
    """
    values = np.asarray(image, dtype=np.float64).ravel()
    values = values[np.isfinite(values)]

    if values.size == 0 or np.ptp(values) < _OTSU_MIN_RANGE:
        raise DegenerateInputError("Otsu's method needs a non-constant input")

    hist, edges = np.histogram(
        values, bins=_OTSU_BINS, range=(values.min(), values.max())
    )
    centers = 0.5 * (edges[:-1] + edges[1:])
    hist = hist.astype(np.float64)

    # Class 0 takes bins [0, k), k = 1..255
    w0 = np.cumsum(hist)[:-1]
    w1 = hist.sum() - w0
    s0 = np.cumsum(hist * centers)[:-1]
    s1 = (hist * centers).sum() - s0

    with np.errstate(divide="ignore", invalid="ignore"):
        between = w0 * w1 * (s0 / w0 - s1 / w1) ** 2

    between[(w0 == 0) | (w1 == 0)] = -1.0
    ties = np.flatnonzero(between == between.max())
    k = ties[len(ties) // 2] + 1
    return float(edges[k])


def build_mask(
        patch: Patch,
        model: DepthModel,
        region: Region,
        cell_size: int,
        ratio_clip: Optional[float] = 20.0,
        mask_threshold: Optional[float] = None
) -> Mask:
    """Segments the patch into foreground and background cells.

    Pixels with valid depth whose ratio exceeds the threshold are
    foreground, missing depth never is. A cell is active when at least half
    of its pixels are foreground. Otsu's threshold is taken over the valid
    depth pixels and falls back to ``0`` when degenerate.

    Args:
        patch (Patch): Search region.
        model (DepthModel): Depth distributions.
        region (Region): Pixel region of the current box inside ``patch``.
        cell_size (int): Pixels per cell side.
        ratio_clip (Optional[float]): See :func:`probability_ratio_image`.
        mask_threshold (Optional[float]): Fixed probability ratio. Otsu's
            method is used when ``None``.

    Returns:
        Mask: Cell mask with its support inside ``region``.
    """
    ratio = probability_ratio_image(patch, model, ratio_clip=ratio_clip)

    if mask_threshold is not None:
        threshold = float(np.log(mask_threshold))

    else:
        try:
            threshold = otsu_threshold(ratio[patch.depth > 0])

        except DegenerateInputError:
            threshold = 0.0

    h, w = patch.shape
    foreground = ((ratio > threshold) & (patch.depth > 0)).astype(np.float64)
    votes = foreground.reshape(
        h // cell_size, cell_size, w // cell_size, cell_size
    ).mean(axis=(1, 3))
    return Mask.from_values(votes >= 0.5, cell_region(region, cell_size))


def upsample_mask(mask: Mask, cell_size: int) -> np.ndarray:
    """Pixel resolution boolean copy of ``mask``."""
    return np.repeat(
        np.repeat(mask.values.astype(bool), cell_size, axis=0),
        cell_size,
        axis=1
    )


def update_model(
        model: DepthModel,
        patch: Patch,
        mask: Mask,
        gate: Optional[float] = None
) -> DepthModel:
    """Blends the current frame statistics into ``model``.

    Foreground samples are the valid depths under active mask cells and
    background samples the remaining valid depths. With ``gate`` set, only
    active depths within ``gate`` foreground standard deviations of the
    foreground mean are foreground samples; the rest, typically a nearer
    occluder entering the search region, are background samples. Means are
    updated with rate ``theta`` and standard deviations with rate
    ``gamma``. An empty foreground sample leaves the model unchanged, an
    empty background sample leaves the background unchanged.

    Args:
        model (DepthModel): Current model.
        patch (Patch): Search region the mask was built on.
        mask (Mask): Cell mask.
        gate (Optional[float]): Foreground gate in standard deviations. No
            gating when ``None``.

    Returns:
        DepthModel: The updated model.
    """
    cell_size = patch.shape[0] // mask.values.shape[0]
    valid = patch.depth > 0
    foreground = upsample_mask(mask, cell_size) & valid

    if gate is not None:
        distance = np.abs(patch.depth.astype(np.float64) - model.mu_fg)
        foreground &= distance <= gate * model.sigma_fg

    fg = patch.depth[foreground].astype(np.float64)
    bg = patch.depth[~foreground & valid].astype(np.float64)

    if fg.size == 0:
        return model

    def _blend(sample: float, old: float, rate: float) -> float:
        return sample * rate + old * (1.0 - rate)

    mu_fg = _blend(float(fg.mean()), model.mu_fg, model.theta)
    sigma_fg = _blend(float(fg.std()), model.sigma_fg, model.gamma)
    mu_bg, sigma_bg = model.mu_bg, model.sigma_bg

    if bg.size > 0:
        mu_bg = _blend(float(bg.mean()), model.mu_bg, model.theta)
        sigma_bg = _blend(float(bg.std()), model.sigma_bg, model.gamma)

    return DepthModel(
        mu_fg, sigma_fg, mu_bg, sigma_bg,
        theta=model.theta, gamma=model.gamma, sigma_min=model.sigma_min
    )
