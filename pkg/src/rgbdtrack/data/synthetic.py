"""Seeded synthetic RGBD sequences.

A textured target moves in front of a slanted textured background while a
nearer occluder slides in from the left. The occluder follows a coverage
schedule, so the exact occluded share of the target is known on every
frame. Sequences are written in the Princeton layout.
"""
import cv2
import os
import numpy as np
import polars as pl
from dataclasses import (
    dataclass,
    fields
)
from tqdm import tqdm
from typing import (
    Dict,
    List,
    Optional,
    Tuple
)
from .sequences import (
    Sequence,
    load_sequence
)
from ..core.config import (
    get_categories_filename,
    get_category_tags,
    get_coverage_filename,
    get_ground_truth_filenames,
    get_init_filename
)
from ..core.exceptions import SyntheticSpecError
from ..core.io import (
    write_depth,
    write_rgb
)

# Occluder size relative to the target
_OCCLUDER_SCALE = 1.2
_MAX_DEPTH = 65535


@dataclass(frozen=True)
class SyntheticSpec:
    """Description of a synthetic sequence.

    Attributes:
        name (str): Sequence folder name.
        width (int): Canvas width.
        height (int): Canvas height.
        num_frames (int): Number of frames.
        seed (int): Seed of every random draw.
        target_size (Tuple[float, float]): Target ``(w, h)`` on frame 0.
        target_start (Tuple[float, float]): Target top-left corner on
            frame 0.
        target_velocity (Tuple[float, float]): Pixels per frame.
        target_scale_rate (float): Relative size change per frame.
        target_depth (float): Target depth (mm).
        background_depth (Tuple[float, float]): Background depth at the
            left and right canvas edges (mm).
        occluder_depth (float): Occluder depth (mm).
        coverage (Tuple[Tuple[int, float], ...]): ``(frame, coverage)``
            keyframes, linearly interpolated and held beyond the ends.
        rgb_noise (float): RGB noise standard deviation.
        depth_noise (float): Depth noise standard deviation (mm).
        hole_rate (float): Share of pixels with missing depth.
        absent_coverage (float): Ground truth marks the target absent from
            this coverage on.
        category_tags (Tuple[str, ...]): Tags of the sequence.
    """
    name: str = "synthetic"
    width: int = 640
    height: int = 480
    num_frames: int = 60
    seed: int = 0
    target_size: Tuple[float, float] = (64.0, 80.0)
    target_start: Tuple[float, float] = (288.0, 200.0)
    target_velocity: Tuple[float, float] = (0.0, 0.0)
    target_scale_rate: float = 0.0
    target_depth: float = 2000.0
    background_depth: Tuple[float, float] = (2500.0, 4500.0)
    occluder_depth: float = 1000.0
    coverage: Tuple[Tuple[int, float], ...] = ()
    rgb_noise: float = 2.0
    depth_noise: float = 5.0
    hole_rate: float = 0.0
    absent_coverage: float = 0.9
    category_tags: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.width < 16 or self.height < 16 or self.num_frames < 1:
            raise SyntheticSpecError(
                "Canvas must be at least 16x16 pixels with 1 frame"
            )

        if min(self.target_size) < 4:
            raise SyntheticSpecError(
                f"Target must be at least 4x4 pixels. Found "
                f"{self.target_size}"
            )

        if not 0.0 <= self.hole_rate < 1.0:
            raise SyntheticSpecError(
                f"'hole_rate' must be within [0, 1). Found {self.hole_rate}"
            )

        if self.rgb_noise < 0 or self.depth_noise < 0:
            raise SyntheticSpecError("Noise levels must be >= 0")

        if min(self.target_depth, *self.background_depth) <= 0:
            raise SyntheticSpecError("Depths must be positive")

        for frame, value in self.coverage:
            if not 0 <= frame < self.num_frames:
                raise SyntheticSpecError(
                    f"Coverage keyframe {frame} outside of "
                    f"[0, {self.num_frames})"
                )

            if not 0.0 <= value <= 1.0:
                raise SyntheticSpecError(
                    f"Coverage must be within [0, 1]. Found {value}"
                )

        occludes = any(value > 0 for _, value in self.coverage)

        if occludes and not 0 < self.occluder_depth < self.target_depth:
            raise SyntheticSpecError(
                f"Occluder depth {self.occluder_depth} must be positive and "
                f"nearer than the target depth {self.target_depth}"
            )

        unknown = set(self.category_tags) - set(get_category_tags())

        if len(unknown) > 0:
            raise SyntheticSpecError(f"Unknown category tags {unknown}")

    @classmethod
    def from_dict(cls, d: dict) -> "SyntheticSpec":
        """Builds a spec from a mapping of field names, lists accepted for
        tuples.
        """
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names

        if len(unknown) > 0:
            raise SyntheticSpecError(f"Unknown keys {sorted(unknown)}")

        values = dict(d)

        for key in (
            "target_size", "target_start", "target_velocity",
            "background_depth", "category_tags"
        ):
            if key in values:
                values[key] = tuple(values[key])

        if "coverage" in values:
            values["coverage"] = tuple(
                (int(k[0]), float(k[1])) for k in values["coverage"]
            )

        try:
            return cls(**values)

        except (TypeError, ValueError) as e:
            if isinstance(e, SyntheticSpecError):
                raise

            raise SyntheticSpecError(f"Invalid synthetic spec: {e}") from e


def coverage_schedule(spec: SyntheticSpec) -> np.ndarray:
    """Requested coverage of every frame."""
    if len(spec.coverage) == 0:
        return np.zeros(spec.num_frames)

    keys = sorted(spec.coverage)
    return np.interp(
        np.arange(spec.num_frames),
        [k[0] for k in keys],
        [k[1] for k in keys]
    )


def target_boxes(spec: SyntheticSpec) -> List[Tuple[int, int, int, int]]:
    """Integer ``(x, y, w, h)`` of the rendered target on every frame."""
    boxes = []

    for t in range(spec.num_frames):
        scale = (1.0 + spec.target_scale_rate) ** t
        w = spec.target_size[0] * scale
        h = spec.target_size[1] * scale
        # Zoom keeps the initial center
        cx = spec.target_start[0] + spec.target_size[0] / 2.0
        cy = spec.target_start[1] + spec.target_size[1] / 2.0
        cx += spec.target_velocity[0] * t
        cy += spec.target_velocity[1] * t
        w_, h_ = max(1, int(round(w))), max(1, int(round(h)))
        boxes.append(
            (int(round(cx - w_ / 2.0)), int(round(cy - h_ / 2.0)), w_, h_)
        )

    return boxes


def _smooth_texture(
        rng: np.random.Generator,
        width: int,
        height: int,
        grain: int
) -> np.ndarray:
    coarse = rng.uniform(
        0, 255, (max(2, height // grain), max(2, width // grain), 3)
    ).astype(np.float32)
    return np.clip(
        cv2.resize(coarse, (width, height), interpolation=cv2.INTER_CUBIC),
        0,
        255
    )


def _paste(
        canvas: np.ndarray,
        values: np.ndarray,
        x: int,
        y: int
) -> None:
    """Writes ``values`` at ``(x, y)`` clipping to ``canvas``."""
    h, w = values.shape[:2]
    rows, cols = canvas.shape[:2]
    x0, y0 = max(0, x), max(0, y)
    x1, y1 = min(cols, x + w), min(rows, y + h)

    if x1 <= x0 or y1 <= y0:
        return

    canvas[y0:y1, x0:x1] = values[y0 - y:y1 - y, x0 - x:x1 - x]


def _check_schedule(
        spec: SyntheticSpec,
        boxes: List[Tuple[int, int, int, int]],
        coverage: np.ndarray
) -> None:
    for t, ((x, y, w, h), c) in enumerate(zip(boxes, coverage)):
        if c <= 0:
            continue

        covered = int(round(c * w))
        inside = (
            x < spec.width and y < spec.height and x + w > 0 and y + h > 0
        )

        if not inside or x + covered <= 0:
            raise SyntheticSpecError(
                f"Frame {t}: coverage {c:.2f} is scheduled while the "
                "occluded part of the target is off-canvas"
            )


def generate_synthetic(
        spec: SyntheticSpec,
        out_dir: str,
        verbose: bool = False
) -> Sequence:
    """Renders ``spec`` into ``out_dir/<name>``.

    Every random draw comes from one generator seeded with ``spec.seed``,
    so equal specs give bit-identical files.

    Args:
        spec (SyntheticSpec): Sequence description.
        out_dir (str): Parent folder of the sequence folder.
        verbose (bool): If ``True`` a progress bar is displayed.

    Returns:
        Sequence: The written sequence.

    Raises:
        SyntheticSpecError: If the schedule is impossible or the target is
            not visible on the first frame.
    """
    boxes = target_boxes(spec)
    requested = coverage_schedule(spec)
    _check_schedule(spec, boxes, requested)

    rng = np.random.default_rng(spec.seed)
    background = _smooth_texture(rng, spec.width, spec.height, 24)
    texture = _smooth_texture(
        rng,
        int(round(spec.target_size[0])),
        int(round(spec.target_size[1])),
        8
    )
    occluder_texture = _smooth_texture(rng, 64, 64, 8) * 0.6

    ramp = np.linspace(
        spec.background_depth[0], spec.background_depth[1], spec.width
    )
    background_depth = np.tile(ramp, (spec.height, 1))

    seq_dir = os.path.join(out_dir, spec.name)
    rgb_dir = os.path.join(seq_dir, "rgb")
    depth_dir = os.path.join(seq_dir, "depth")
    os.makedirs(rgb_dir, exist_ok=True)
    os.makedirs(depth_dir, exist_ok=True)

    truth: List[Optional[Tuple[int, int, int, int]]] = []
    coverage: List[float] = []

    for t in tqdm(
        range(spec.num_frames),
        desc=f"Rendering {spec.name}",
        disable=not verbose
    ):
        x, y, w, h = boxes[t]
        rgb = background.copy()
        depth = background_depth.copy()

        target = cv2.resize(texture, (w, h), interpolation=cv2.INTER_LINEAR)
        _paste(rgb, target, x, y)
        _paste(depth, np.full((h, w), spec.target_depth), x, y)

        covered = int(round(requested[t] * w))

        if covered > 0:
            ow = int(round(_OCCLUDER_SCALE * w))
            oh = int(round(_OCCLUDER_SCALE * h))
            ox = x + covered - ow
            oy = y - int(round((_OCCLUDER_SCALE - 1.0) * h / 2.0))
            occluder = cv2.resize(
                occluder_texture, (ow, oh), interpolation=cv2.INTER_LINEAR
            )
            _paste(rgb, occluder, ox, oy)
            _paste(depth, np.full((oh, ow), spec.occluder_depth), ox, oy)

        if spec.rgb_noise > 0:
            rgb = rgb + rng.normal(0.0, spec.rgb_noise, rgb.shape)

        if spec.depth_noise > 0:
            depth = depth + rng.normal(0.0, spec.depth_noise, depth.shape)

        depth = np.clip(np.round(depth), 1, _MAX_DEPTH)

        if spec.hole_rate > 0:
            depth[rng.random(depth.shape) < spec.hole_rate] = 0

        write_rgb(
            np.clip(np.round(rgb), 0, 255).astype(np.uint8),
            os.path.join(rgb_dir, f"r-{t:06d}.png")
        )
        write_depth(
            depth.astype(np.uint16),
            os.path.join(depth_dir, f"d-{t:06d}.png")
        )

        exact = covered / w
        visible = (
            x < spec.width and y < spec.height and x + w > 0 and y + h > 0
        )
        present = visible and exact < spec.absent_coverage
        truth.append((x, y, w, h) if present else None)
        coverage.append(exact)

    if truth[0] is None:
        raise SyntheticSpecError("Target must be visible on the first frame")

    def _box_line(box: Optional[Tuple[int, int, int, int]]) -> str:
        return "NaN,NaN,NaN,NaN" if box is None else ",".join(map(str, box))

    with open(os.path.join(seq_dir, get_init_filename()), "w") as f:
        f.write(f"{_box_line(truth[0])}\n")

    gt_file = os.path.join(seq_dir, get_ground_truth_filenames()[0])

    with open(gt_file, "w") as f:
        f.writelines(f"{_box_line(b)}\n" for b in truth)

    with open(os.path.join(seq_dir, get_coverage_filename()), "w") as f:
        f.writelines(f"{c!r}\n" for c in coverage)

    categories = (
        {spec.name: spec.category_tags} if len(spec.category_tags) > 0
        else {}
    )
    return load_sequence(seq_dir, categories=categories)


def write_categories(
        specs: List[SyntheticSpec],
        out_dir: str
) -> Optional[str]:
    """Writes the ``categories.csv`` file of generated sequences.

    Returns:
        Optional[str]: The file, or ``None`` if no spec carries tags.
    """
    rows = [(s.name, ";".join(s.category_tags)) for s in specs]

    if not any(tags for _, tags in rows):
        return None

    file = os.path.join(out_dir, get_categories_filename())
    pl.DataFrame(
        {"name": [r[0] for r in rows], "tags": [r[1] for r in rows]}
    ).write_csv(file)
    return file


def occlusion_sweep_spec(
        seed: int = 0,
        name: Optional[str] = None,
        **overrides
) -> SyntheticSpec:
    """Standard occluder sweep: visible, covered for 15 frames at 90% or
    more, then visible again.
    """
    values: Dict = {
        "name": name if name is not None else f"sweep_{seed:03d}",
        "num_frames": 70,
        "seed": seed,
        "target_velocity": (0.5, 0.0),
        "coverage": ((0, 0.0), (20, 0.0), (28, 1.0), (42, 1.0), (50, 0.0)),
        "category_tags": ("rigid", "occlusion", "slow", "passive")
    }
    values.update(overrides)
    return SyntheticSpec(**values)
