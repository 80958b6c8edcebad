"""Frames, boxes and padded patch extraction."""
import cv2
import numpy as np
from dataclasses import dataclass
from typing import Tuple
from ..core.exceptions import InvalidGeometryError
from ..core.guards import is_positive_size_or_error


@dataclass(frozen=True)
class BoundingBox:
    """Axis aligned box in pixels.

    Attributes:
        x (float): Left edge.
        y (float): Top edge.
        w (float): Width. Must be positive.
        h (float): Height. Must be positive.
    """
    x: float
    y: float
    w: float
    h: float

    def __post_init__(self):
        is_positive_size_or_error((self.w, self.h), "Bounding box size")

    @classmethod
    def from_center(
            cls,
            center: Tuple[float, float],
            size: Tuple[float, float]
    ) -> "BoundingBox":
        """Builds a box from a ``(cx, cy)`` center and a ``(w, h)`` size."""
        return cls(
            center[0] - size[0] / 2.0,
            center[1] - size[1] / 2.0,
            size[0],
            size[1]
        )

    @property
    def center(self) -> Tuple[float, float]:
        return (self.x + self.w / 2.0, self.y + self.h / 2.0)

    @property
    def size(self) -> Tuple[float, float]:
        return (self.w, self.h)

    @property
    def area(self) -> float:
        return self.w * self.h

    @property
    def corners(self) -> Tuple[float, float, float, float]:
        """``(x1, y1, x2, y2)`` with ``x2 = x + w`` and ``y2 = y + h``."""
        return (self.x, self.y, self.x + self.w, self.y + self.h)


@dataclass(frozen=True, eq=False)
class Frame:
    """Synchronized RGB and depth pair.

    Attributes:
        rgb (np.ndarray): ``(H, W, 3)`` ``uint8`` image.
        depth (np.ndarray): ``(H, W)`` depth in millimeters, ``0`` where
            there is no measurement.
        index (int): Frame counter.
    """
    rgb: np.ndarray
    depth: np.ndarray
    index: int = 0

    def __post_init__(self):
        if self.rgb.ndim != 3 or self.rgb.shape[2] != 3:
            raise InvalidGeometryError(
                f"RGB image must be (H, W, 3). Found {self.rgb.shape}"
            )

        if self.rgb.dtype != np.uint8:
            raise InvalidGeometryError(
                f"RGB image must be uint8. Found {self.rgb.dtype}"
            )

        if self.depth.shape != self.rgb.shape[:2]:
            raise InvalidGeometryError(
                f"Depth map {self.depth.shape} does not match RGB image "
                f"{self.rgb.shape[:2]}"
            )

        if np.any(self.depth < 0):
            raise InvalidGeometryError("Depth values must be >= 0")

        if self.index < 0:
            raise InvalidGeometryError(
                f"Frame index must be >= 0. Found {self.index}"
            )

    @property
    def height(self) -> int:
        return self.rgb.shape[0]

    @property
    def width(self) -> int:
        return self.rgb.shape[1]


@dataclass(frozen=True, eq=False)
class Patch:
    """Search region resampled to the template size.

    Attributes:
        pixels (np.ndarray): ``(h_p, w_p, 3)`` ``float32`` RGB in ``[0, 255]``.
        depth (np.ndarray): ``(h_p, w_p)`` ``float32`` depth in millimeters.
        origin (BoundingBox): Frame region the patch was cut from,
            padding included.
    """
    pixels: np.ndarray
    depth: np.ndarray
    origin: BoundingBox

    @property
    def shape(self) -> Tuple[int, int]:
        return self.depth.shape

    @property
    def scale(self) -> Tuple[float, float]:
        """Patch pixels per frame pixel along ``(x, y)``."""
        return (
            self.depth.shape[1] / self.origin.w,
            self.depth.shape[0] / self.origin.h
        )


def _crop_with_border(
        image: np.ndarray,
        x0: int,
        y0: int,
        w: int,
        h: int,
        border_type: int
) -> np.ndarray:
    """Cuts ``image[y0:y0+h, x0:x0+w]`` filling the outside with
    ``border_type``.
    """
    rows, cols = image.shape[:2]
    x1, y1 = x0 + w, y0 + h

    left, top = max(0, -x0), max(0, -y0)
    right, bottom = max(0, x1 - cols), max(0, y1 - rows)

    # Region entirely outside the frame
    if x0 >= cols or y0 >= rows or x1 <= 0 or y1 <= 0:
        if border_type == cv2.BORDER_CONSTANT:
            return np.zeros((h, w) + image.shape[2:], dtype=image.dtype)

        # Nearest border pixel is the clamped corner/edge
        ys = np.clip(np.arange(y0, y1), 0, rows - 1)
        xs = np.clip(np.arange(x0, x1), 0, cols - 1)
        return image[np.ix_(ys, xs)]

    crop = np.ascontiguousarray(
        image[max(0, y0):min(rows, y1), max(0, x0):min(cols, x1)]
    )

    if left or top or right or bottom:
        crop = cv2.copyMakeBorder(
            crop, top, bottom, left, right, border_type, value=0
        )

    return crop


def extract_patch(
        frame: Frame,
        center: Tuple[float, float],
        size: Tuple[float, float],
        padding_factor: float,
        template_size: Tuple[int, int]
) -> Patch:
    """Cuts the padded region around ``center`` and resamples it.

    The region has side ``padding_factor * size`` per axis. Pixels outside
    the frame replicate the nearest border pixel, depth outside the frame is
    missing (``0``). RGB is resampled bilinearly, depth with nearest
    neighbor so no depth is invented across object boundaries.

    Args:
        frame (Frame): Source frame.
        center (Tuple[float, float]): Region center ``(cx, cy)``.
        size (Tuple[float, float]): Target size ``(w, h)``.
        padding_factor (float): Region to target side ratio (``>= 1``).
        template_size (Tuple[int, int]): Output ``(w, h)``.

    Returns:
        Patch: The resampled region.

    Raises:
        InvalidGeometryError: If a size is not positive before or after
            rounding to whole pixels.
    """
    is_positive_size_or_error(size, "Target size")
    is_positive_size_or_error(template_size, "Template size")

    if padding_factor < 1:
        raise InvalidGeometryError(
            f"Padding factor must be >= 1. Found {padding_factor}"
        )

    region_w = int(round(size[0] * padding_factor))
    region_h = int(round(size[1] * padding_factor))

    if region_w <= 0 or region_h <= 0:
        raise InvalidGeometryError(
            f"Region of size {size} degenerates to {region_w}x{region_h} "
            "pixels"
        )

    x0 = int(round(center[0] - region_w / 2.0))
    y0 = int(round(center[1] - region_h / 2.0))

    rgb = _crop_with_border(
        frame.rgb, x0, y0, region_w, region_h, cv2.BORDER_REPLICATE
    )
    depth = _crop_with_border(
        frame.depth, x0, y0, region_w, region_h, cv2.BORDER_CONSTANT
    )

    out_w, out_h = int(template_size[0]), int(template_size[1])
    rgb = rgb.astype(np.float32)
    depth = depth.astype(np.float32)

    if (out_w, out_h) != (region_w, region_h):
        rgb = cv2.resize(rgb, (out_w, out_h), interpolation=cv2.INTER_LINEAR)
        depth = cv2.resize(
            depth, (out_w, out_h), interpolation=cv2.INTER_NEAREST
        )

    return Patch(
        pixels=rgb,
        depth=depth,
        origin=BoundingBox(x0, y0, region_w, region_h)
    )


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection over union of two boxes, ``0.0`` when disjoint."""
    ix = min(a.x + a.w, b.x + b.w) - max(a.x, b.x)
    iy = min(a.y + a.h, b.y + b.h) - max(a.y, b.y)

    if ix <= 0 or iy <= 0:
        return 0.0

    if a == b:
        return 1.0

    inter = ix * iy
    return inter / (a.area + b.area - inter)
