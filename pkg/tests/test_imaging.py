import numpy as np
import pytest
from rgbdtrack.core.exceptions import InvalidGeometryError
from rgbdtrack.tracking.imaging import (
    BoundingBox,
    Frame,
    extract_patch,
    iou
)


def _bilinear_reference(image: np.ndarray, out_w: int, out_h: int):
    """Half-pixel-centered bilinear resampling with edge clamping."""
    h, w = image.shape[:2]
    ys = np.clip((np.arange(out_h) + 0.5) * h / out_h - 0.5, 0, h - 1)
    xs = np.clip((np.arange(out_w) + 0.5) * w / out_w - 0.5, 0, w - 1)
    y0 = np.floor(ys).astype(int)
    x0 = np.floor(xs).astype(int)
    y1 = np.minimum(y0 + 1, h - 1)
    x1 = np.minimum(x0 + 1, w - 1)
    fy = (ys - y0)[:, None, None]
    fx = (xs - x0)[None, :, None]
    img = image.astype(np.float64)
    top = img[y0][:, x0] * (1 - fx) + img[y0][:, x1] * fx
    bottom = img[y1][:, x0] * (1 - fx) + img[y1][:, x1] * fx
    return top * (1 - fy) + bottom * fy


def test_iou_examples():
    a = BoundingBox(0, 0, 10, 10)
    assert iou(a, a) == 1.0
    assert iou(a, BoundingBox(20, 20, 5, 5)) == 0.0
    assert iou(a, BoundingBox(5, 0, 10, 10)) == pytest.approx(1.0 / 3.0)


def test_iou_is_symmetric():
    rng = np.random.default_rng(3)

    for _ in range(50):
        a = BoundingBox(*rng.uniform(0, 50, 2), *rng.uniform(1, 40, 2))
        b = BoundingBox(*rng.uniform(0, 50, 2), *rng.uniform(1, 40, 2))
        assert iou(a, b) == pytest.approx(iou(b, a), abs=1e-12)
        assert 0.0 <= iou(a, b) <= 1.0


def test_box_requires_positive_size():
    with pytest.raises(InvalidGeometryError):
        BoundingBox(0, 0, 0, 10)

    with pytest.raises(InvalidGeometryError):
        BoundingBox(0, 0, 10, -1)


def test_box_geometry():
    box = BoundingBox.from_center((50, 40), (20, 10))
    assert box.corners == (40, 35, 60, 45)
    assert box.center == (50, 40)
    assert box.area == 200


def test_frame_validation():
    rgb = np.zeros((10, 12, 3), dtype=np.uint8)

    with pytest.raises(InvalidGeometryError):
        Frame(rgb=rgb, depth=np.zeros((10, 11)))

    with pytest.raises(InvalidGeometryError):
        Frame(rgb=rgb.astype(np.float32), depth=np.zeros((10, 12)))

    with pytest.raises(InvalidGeometryError):
        Frame(rgb=rgb, depth=-np.ones((10, 12)))


def test_extract_patch_identity(scene):
    patch = extract_patch(scene, (160, 120), (64, 48), 1.0, (64, 48))
    np.testing.assert_array_equal(
        patch.pixels, scene.rgb[96:144, 128:192].astype(np.float32)
    )
    np.testing.assert_array_equal(
        patch.depth, scene.depth[96:144, 128:192].astype(np.float32)
    )
    assert patch.shape == (48, 64)
    assert patch.origin == BoundingBox(128, 96, 64, 48)


def test_extract_patch_constant_image_at_corner():
    frame = Frame(
        rgb=np.full((60, 80, 3), 128, dtype=np.uint8),
        depth=np.full((60, 80), 1000, dtype=np.uint16)
    )
    patch = extract_patch(frame, (0, 0), (30, 20), 2.0, (48, 32))
    assert np.all(patch.pixels == 128)
    assert patch.shape == (32, 48)


def test_extract_patch_fills_missing_depth_outside_frame():
    frame = Frame(
        rgb=np.full((60, 80, 3), 50, dtype=np.uint8),
        depth=np.full((60, 80), 1000, dtype=np.uint16)
    )
    patch = extract_patch(frame, (0, 0), (20, 20), 1.0, (20, 20))

    # Region spans [-10, 10) on both axes
    assert np.all(patch.depth[:10, :] == 0)
    assert np.all(patch.depth[:, :10] == 0)
    assert np.all(patch.depth[10:, 10:] == 1000)
    assert np.all(patch.pixels == 50)


def test_extract_patch_fully_outside_frame():
    frame = Frame(
        rgb=np.full((60, 80, 3), 7, dtype=np.uint8),
        depth=np.full((60, 80), 1000, dtype=np.uint16)
    )
    patch = extract_patch(frame, (500, 500), (10, 10), 1.0, (10, 10))
    assert np.all(patch.pixels == 7)
    assert np.all(patch.depth == 0)


def test_extract_patch_matches_reference_resampler(scene):
    patch = extract_patch(scene, (160, 120), (32, 24), 2.0, (128, 96))
    crop = scene.rgb[96:144, 128:192]
    reference = _bilinear_reference(crop, 128, 96)
    assert np.max(np.abs(patch.pixels - reference)) <= 1.0


def test_extract_patch_depth_is_nearest_neighbor(scene):
    patch = extract_patch(scene, (160, 120), (32, 24), 2.0, (128, 96))
    crop_values = set(np.unique(scene.depth[96:144, 128:192]).tolist())
    assert set(np.unique(patch.depth).astype(int).tolist()) <= crop_values


def test_extract_patch_degenerate_geometry(scene):
    with pytest.raises(InvalidGeometryError):
        extract_patch(scene, (100, 100), (0.2, 0.2), 1.0, (8, 8))

    with pytest.raises(InvalidGeometryError):
        extract_patch(scene, (100, 100), (10, 10), 0.5, (8, 8))

    with pytest.raises(InvalidGeometryError):
        extract_patch(scene, (100, 100), (10, 10), 2.0, (0, 8))
