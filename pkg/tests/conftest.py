import os
import cv2
import numpy as np
import pytest
from rgbdtrack.core.io import (
    write_depth,
    write_rgb
)
from rgbdtrack.data.synthetic import (
    SyntheticSpec,
    generate_synthetic,
    occlusion_sweep_spec
)
from rgbdtrack.tracking.imaging import (
    BoundingBox,
    Frame
)

TOY_INIT_BOX = (128, 84, 72, 96)


def smooth_texture(
        rng: np.random.Generator,
        width: int,
        height: int,
        scale: int = 8
) -> np.ndarray:
    """Low frequency ``(height, width, 3)`` ``uint8`` texture."""
    coarse = rng.uniform(
        0, 255, (height // scale + 2, width // scale + 2, 3)
    ).astype(np.float32)
    texture = cv2.resize(
        coarse, (width, height), interpolation=cv2.INTER_CUBIC
    )
    return np.clip(texture, 0, 255).astype(np.uint8)


def make_scene(
        box: BoundingBox,
        width: int = 320,
        height: int = 240,
        seed: int = 0,
        target_depth: float = 1500.0,
        background_depth: float = 3000.0,
        index: int = 0
) -> Frame:
    """Textured target box over a textured background at another depth."""
    rng = np.random.default_rng(seed)
    rgb = smooth_texture(rng, width, height, scale=16)
    target = smooth_texture(rng, int(box.w), int(box.h), scale=6)
    x, y = int(box.x), int(box.y)
    rgb[y:y + int(box.h), x:x + int(box.w)] = target

    depth = np.full((height, width), background_depth, dtype=np.float64)
    depth[y:y + int(box.h), x:x + int(box.w)] = target_depth
    depth += rng.normal(0.0, 5.0, depth.shape)
    return Frame(rgb=rgb, depth=depth.astype(np.uint16), index=index)


@pytest.fixture
def scene_box() -> BoundingBox:
    return BoundingBox(128.0, 84.0, 64.0, 72.0)


@pytest.fixture
def scene(scene_box) -> Frame:
    return make_scene(scene_box)


@pytest.fixture
def toy_sequence_dir(tmp_path) -> str:
    """5-frame sequence in the Princeton layout."""
    seq_dir = tmp_path / "toy"
    os.makedirs(seq_dir / "rgb")
    os.makedirs(seq_dir / "depth")
    box = BoundingBox(*TOY_INIT_BOX)

    for i in range(5):
        frame = make_scene(box, seed=i)
        write_rgb(
            frame.rgb, str(seq_dir / "rgb" / f"r-{1000 + i}-{i + 1}.png")
        )
        write_depth(
            frame.depth, str(seq_dir / "depth" / f"d-{1000 + i}-{i + 1}.png")
        )

    (seq_dir / "init.txt").write_text("128,84,72,96\n")
    (seq_dir / "groundtruth.txt").write_text(
        "".join("128,84,72,96\n" for _ in range(5))
    )
    return str(seq_dir)


@pytest.fixture(scope="session")
def sweep_sequence(tmp_path_factory):
    """Seeded occluder sweep: covered at 90% or more on frames 28 to 42."""
    out_dir = tmp_path_factory.mktemp("sweep")
    return generate_synthetic(occlusion_sweep_spec(seed=0), str(out_dir))


@pytest.fixture(scope="session")
def static_sequence(tmp_path_factory):
    out_dir = tmp_path_factory.mktemp("static")
    return generate_synthetic(
        SyntheticSpec(name="static", num_frames=50, seed=1), str(out_dir)
    )
