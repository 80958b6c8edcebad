"""Princeton RGBD sequence ingestion.

A sequence folder holds ``rgb/`` and ``depth/`` frame folders, an
``init.txt`` file with the initial ``x,y,w,h`` box and optionally a
``groundtruth.txt`` (or ``gt.txt``) file with one box per frame, where
``NaN`` marks frames in which the target is absent. Synthetic sequences add
a ``coverage.txt`` file with the occluded share of the target per frame.
A dataset root may hold a ``categories.csv`` file with ``name,tags``
columns, tags separated by ``;``.
"""
import math
import os
import re
import polars as pl
from dataclasses import (
    dataclass,
    field
)
from typing import (
    Dict,
    List,
    Optional,
    Tuple
)
from ..core.config import (
    get_allowed_image_extensions,
    get_categories_filename,
    get_category_tags,
    get_coverage_filename,
    get_depth_encodings,
    get_ground_truth_filenames,
    get_init_filename
)
from ..core.exceptions import (
    IngestionError,
    InvalidGeometryError
)
from ..core.io import (
    frame_number,
    get_dir_files,
    read_depth,
    read_rgb
)
from ..tracking.imaging import (
    BoundingBox,
    Frame
)


@dataclass(frozen=True)
class Sequence:
    """RGBD sequence on disk.

    Attributes:
        name (str): Sequence name.
        frames (Tuple[Tuple[str, str], ...]): ``(rgb, depth)`` file pairs in
            frame order.
        init_box (BoundingBox): Box of the first frame.
        ground_truth (Optional[Tuple[Optional[BoundingBox], ...]]): One box
            per frame, ``None`` where the target is absent.
        category_tags (Tuple[str, ...]): Attribute tags.
        coverage (Optional[Tuple[float, ...]]): Occluded share of the target
            per frame.
        depth_encoding (str): Depth PNG encoding.
    """
    name: str
    frames: Tuple[Tuple[str, str], ...]
    init_box: BoundingBox
    ground_truth: Optional[Tuple[Optional[BoundingBox], ...]] = None
    category_tags: Tuple[str, ...] = field(default_factory=tuple)
    coverage: Optional[Tuple[float, ...]] = None
    depth_encoding: str = "mm"

    def __len__(self) -> int:
        return len(self.frames)

    def read_frame(self, index: int) -> Frame:
        """Reads frame ``index`` (0-based) from disk."""
        rgb_file, depth_file = self.frames[index]
        rgb = read_rgb(rgb_file)
        depth = read_depth(depth_file, encoding=self.depth_encoding)

        if rgb.shape[:2] != depth.shape:
            raise IngestionError(
                f"Frame {index + 1} of '{self.name}': RGB {rgb.shape[:2]} "
                f"and depth {depth.shape} sizes differ"
            )

        return Frame(rgb=rgb, depth=depth, index=index)


def parse_values(
        line: str
) -> Optional[Tuple[float, float, float, float]]:
    """Parses four comma or whitespace separated numbers, extra columns
    are ignored. Returns ``None`` if any of them is ``NaN``.
    """
    values = [v for v in re.split(r"[,\s]+", line.strip()) if v]

    if len(values) < 4:
        raise ValueError(f"Expected 4 values. Found '{line.strip()}'")

    values = tuple(float(v) for v in values[:4])
    return None if any(math.isnan(v) for v in values) else values


def parse_box(line: str, corners: bool = False) -> Optional[BoundingBox]:
    """Parses ``x,y,w,h`` (comma or whitespace separated), or
    ``x1,y1,x2,y2`` if ``corners`` is ``True``.

    Returns:
        Optional[BoundingBox]: The box, or ``None`` if any value is ``NaN``.

    Raises:
        ValueError: If the line does not hold four numbers or the size is
            not positive.
    """
    values = parse_values(line)

    if values is None:
        return None

    x, y, w, h = values

    if corners:
        w, h = w - x, h - y

    try:
        return BoundingBox(x, y, w, h)

    except InvalidGeometryError as e:
        raise ValueError(str(e)) from e


def read_boxes(
        file: str,
        corners: bool = False
) -> List[Optional[BoundingBox]]:
    """Reads one box per non-empty line of ``file``. See :func:`parse_box`.

    Raises:
        IngestionError: If a line cannot be parsed, naming the line.
    """
    boxes = []

    with open(file, "r") as f:
        for i, line in enumerate(f, start=1):
            if not line.strip():
                continue

            try:
                boxes.append(parse_box(line, corners=corners))

            except ValueError as e:
                raise IngestionError(f"'{file}' line {i}: {e}") from e

    return boxes


def read_coverage(file: str) -> List[float]:
    with open(file, "r") as f:
        try:
            return [float(line) for line in f if line.strip()]

        except ValueError as e:
            raise IngestionError(f"Invalid coverage file '{file}': {e}") from e


def read_categories(file: str) -> Dict[str, Tuple[str, ...]]:
    """Reads the ``name,tags`` category file of a dataset.

    Raises:
        IngestionError: If a column is missing or a tag is unknown.
    """
    df = pl.read_csv(file, schema_overrides={"tags": pl.String})

    if not {"name", "tags"}.issubset(df.columns):
        raise IngestionError(
            f"Categories file '{file}' must have 'name' and 'tags' columns"
        )

    known = set(get_category_tags())
    categories = {}

    for name, tags in df.select("name", "tags").iter_rows():
        tags = tuple(t.strip() for t in (tags or "").split(";") if t.strip())
        unknown = [t for t in tags if t not in known]

        if len(unknown) > 0:
            raise IngestionError(
                f"Unknown category tags {unknown} for sequence '{name}' in "
                f"'{file}'"
            )

        categories[str(name)] = tags

    return categories


def _find_file(dir: str, names: List[str]) -> Optional[str]:
    for name in names:
        file = os.path.join(dir, name)

        if os.path.isfile(file):
            return file

    return None


def load_sequence(
        dir: str,
        depth_encoding: str = "mm",
        categories: Optional[Dict[str, Tuple[str, ...]]] = None
) -> Sequence:
    """Reads a sequence folder.

    Frames are sorted by the trailing frame number of each file name and
    RGB and depth frames must carry the same numbers.

    Args:
        dir (str): Sequence folder.
        depth_encoding (str): Depth PNG encoding, ``mm`` or ``princeton``.
        categories (Optional[Dict[str, Tuple[str, ...]]]): Tags per sequence
            name. If not given, the ``categories.csv`` file of the parent
            folder is used when present.

    Returns:
        Sequence: The sequence.

    Raises:
        IngestionError: If folders or files are missing, frame counts or
            numbers differ or annotation files are malformed.
    """
    if depth_encoding not in get_depth_encodings():
        raise IngestionError(f"Unknown depth encoding '{depth_encoding}'")

    dir = os.path.normpath(dir)
    name = os.path.basename(dir)
    rgb_dir, depth_dir = os.path.join(dir, "rgb"), os.path.join(dir, "depth")

    for d in (rgb_dir, depth_dir):
        if not os.path.isdir(d):
            raise IngestionError(f"Missing frame folder '{d}'")

    ext = get_allowed_image_extensions()
    rgb = get_dir_files(rgb_dir, ext=ext, key=frame_number)
    depth = get_dir_files(depth_dir, ext=".png", key=frame_number)

    if len(rgb) != len(depth):
        raise IngestionError(
            f"Sequence '{name}' has {len(rgb)} RGB and {len(depth)} depth "
            f"frames. First unpaired frame: {min(len(rgb), len(depth)) + 1}"
        )

    if len(rgb) == 0:
        raise IngestionError(f"Sequence '{name}' has no frames")

    for i, (r, d) in enumerate(zip(rgb, depth)):
        if frame_number(r) != frame_number(d):
            raise IngestionError(
                f"Sequence '{name}' pairs '{os.path.basename(r)}' with "
                f"'{os.path.basename(d)}'. First unpaired frame: {i + 1}"
            )

    gt_file = _find_file(dir, get_ground_truth_filenames())
    ground_truth = read_boxes(gt_file) if gt_file is not None else None

    if ground_truth is not None and len(ground_truth) != len(rgb):
        raise IngestionError(
            f"Ground truth of '{name}' has {len(ground_truth)} boxes for "
            f"{len(rgb)} frames"
        )

    init_file = _find_file(dir, [get_init_filename()])

    if init_file is not None:
        init_boxes = read_boxes(init_file)

        if len(init_boxes) == 0 or init_boxes[0] is None:
            raise IngestionError(f"Invalid initial box in '{init_file}'")

        init_box = init_boxes[0]

    elif ground_truth is not None and ground_truth[0] is not None:
        init_box = ground_truth[0]

    else:
        raise IngestionError(f"Sequence '{name}' has no initial box")

    if ground_truth is not None and ground_truth[0] is not None:
        first = ground_truth[0]
        offsets = [
            abs(a - b) for a, b in zip(init_box.corners, first.corners)
        ]

        if max(offsets) > 0.5:
            raise IngestionError(
                f"Initial box of '{name}' differs from the first ground "
                "truth box"
            )

    coverage_file = _find_file(dir, [get_coverage_filename()])
    coverage = None

    if coverage_file is not None:
        coverage = read_coverage(coverage_file)

        if len(coverage) != len(rgb):
            raise IngestionError(
                f"Coverage of '{name}' has {len(coverage)} values for "
                f"{len(rgb)} frames"
            )

    if categories is None:
        categories_file = os.path.join(
            os.path.dirname(dir), get_categories_filename()
        )
        categories = (
            read_categories(categories_file)
            if os.path.isfile(categories_file) else {}
        )

    return Sequence(
        name=name,
        frames=tuple(zip(rgb, depth)),
        init_box=init_box,
        ground_truth=tuple(ground_truth) if ground_truth is not None else None,
        category_tags=tuple(categories.get(name, ())),
        coverage=tuple(coverage) if coverage is not None else None,
        depth_encoding=depth_encoding
    )


def load_dataset(
        root: str,
        depth_encoding: str = "mm",
        category: Optional[str] = None
) -> List[Sequence]:
    """Reads every sequence folder under ``root``.

    Args:
        root (str): Dataset root.
        depth_encoding (str): Depth PNG encoding.
        category (Optional[str]): Keep only sequences with this tag.

    Returns:
        List[Sequence]: Sequences sorted by name.

    Raises:
        IngestionError: If ``root`` holds no sequence or a sequence is
            malformed.
    """
    if not os.path.isdir(root):
        raise IngestionError(f"Dataset folder not found: '{root}'")

    if category is not None and category not in get_category_tags():
        raise IngestionError(f"Unknown category '{category}'")

    categories_file = os.path.join(root, get_categories_filename())
    categories = (
        read_categories(categories_file)
        if os.path.isfile(categories_file) else {}
    )
    dirs = sorted(
        d for d in os.listdir(root)
        if os.path.isdir(os.path.join(root, d, "rgb"))
    )

    if len(dirs) == 0:
        raise IngestionError(f"No sequences found in '{root}'")

    sequences = [
        load_sequence(
            os.path.join(root, d),
            depth_encoding=depth_encoding,
            categories=categories
        )
        for d in dirs
    ]

    if category is not None:
        sequences = [s for s in sequences if category in s.category_tags]

    return sequences
