import numpy as np
import pytest
from rgbdtrack.core.exceptions import (
    DegenerateInputError,
    DepthInitializationError
)
from rgbdtrack.tracking.depth_mask import (
    DepthModel,
    Mask,
    box_region,
    build_mask,
    init_model,
    otsu_threshold,
    probability_ratio_image,
    update_model
)
from rgbdtrack.tracking.imaging import (
    BoundingBox,
    Patch
)

# Box occupies pixels [16, 48) on both axes of a 64x64 patch
REGION = (16, 16, 48, 48)


def _patch(depth: np.ndarray, pixels=None) -> Patch:
    h, w = depth.shape
    pixels = np.zeros((h, w, 3)) if pixels is None else pixels
    return Patch(
        pixels=pixels.astype(np.float32),
        depth=depth.astype(np.float32),
        origin=BoundingBox(0, 0, w, h)
    )


def _scene_depth(target: float = 2000.0) -> np.ndarray:
    depth = np.tile(np.linspace(2500.0, 4500.0, 64), (64, 1))
    depth[16:48, 16:48] = target
    return depth


def _exhaustive_otsu(values: np.ndarray) -> float:
    hist, edges = np.histogram(
        values, bins=256, range=(values.min(), values.max())
    )
    centers = 0.5 * (edges[:-1] + edges[1:])
    scores = []

    for k in range(1, 256):
        w0, w1 = hist[:k].sum(), hist[k:].sum()

        if w0 == 0 or w1 == 0:
            scores.append(-1.0)
            continue

        m0 = (hist[:k] * centers[:k]).sum() / w0
        m1 = (hist[k:] * centers[k:]).sum() / w1
        scores.append(w0 * w1 * (m0 - m1) ** 2)

    scores = np.array(scores)
    ties = np.flatnonzero(scores >= scores.max() * (1.0 - 1e-12))
    return float(edges[ties[len(ties) // 2] + 1])


def test_init_model_two_planes():
    depth = np.full((64, 64), 2000.0)
    depth[16:48, 16:48] = 1000.0
    model = init_model(_patch(depth), REGION)
    assert model.mu_fg == pytest.approx(1000.0)
    assert model.mu_bg == pytest.approx(2000.0)
    assert model.sigma_fg == model.sigma_bg == 20.0


def test_init_model_mixed_box():
    depth = np.full((64, 64), 3000.0)
    box = np.full((20, 20), 1600.0)
    box[:12] = 800.0
    depth[16:36, 16:36] = box
    model = init_model(_patch(depth), (16, 16, 36, 36))
    assert model.mu_fg == pytest.approx(1120.0)
    assert model.sigma_fg == pytest.approx(
        np.sqrt(0.6 * 320.0 ** 2 + 0.4 * 480.0 ** 2)
    )


def test_init_model_without_depth():
    depth = _scene_depth()
    depth[16:48, 16:48] = 0

    with pytest.raises(DepthInitializationError):
        init_model(_patch(depth), REGION)


def test_init_model_without_background_depth():
    depth = np.zeros((64, 64))
    depth[16:48, 16:48] = 1500.0
    model = init_model(_patch(depth), REGION)
    assert model.mu_bg == model.mu_fg
    assert model.sigma_bg > model.sigma_fg


def test_probability_ratio_signs():
    model = DepthModel(1000.0, 50.0, 3000.0, 50.0)
    depth = np.array([[1000.0, 3000.0, 0.0]])
    ratio = probability_ratio_image(_patch(depth), model, ratio_clip=None)
    assert ratio[0, 0] > 100
    assert ratio[0, 1] < -100
    assert ratio[0, 2] == 0.0

    clipped = probability_ratio_image(_patch(depth), model, ratio_clip=20)
    np.testing.assert_array_equal(clipped, [[20.0, -20.0, 0.0]])


def test_probability_ratio_equal_distributions():
    model = DepthModel(1500.0, 100.0, 1500.0, 100.0)
    rng = np.random.default_rng(0)
    ratio = probability_ratio_image(
        _patch(rng.uniform(500, 4000, (8, 8))), model
    )
    np.testing.assert_allclose(ratio, 0.0, atol=1e-12)


def test_otsu_bimodal():
    image = np.concatenate([np.zeros(500), np.ones(500)])
    threshold = otsu_threshold(image)
    assert 0.0 < threshold < 1.0


def test_otsu_matches_exhaustive_search():
    rng = np.random.default_rng(1)

    for _ in range(50):
        values = rng.normal(size=rng.integers(50, 2000)) * rng.uniform(
            0.1, 10
        )
        assert otsu_threshold(values) == _exhaustive_otsu(values)

    for _ in range(10):
        low, high = sorted(rng.uniform(-20, 20, 2))
        share = rng.uniform(0.2, 0.8)
        values = np.where(rng.random(1000) < share, low, high)
        assert otsu_threshold(values) == _exhaustive_otsu(values)


def test_otsu_symmetric_mixture():
    rng = np.random.default_rng(2)
    values = np.concatenate(
        [rng.normal(-2, 0.5, 5000), rng.normal(2, 0.5, 5000)]
    )
    assert abs(otsu_threshold(values)) < 0.3


def test_otsu_constant_input():
    with pytest.raises(DegenerateInputError):
        otsu_threshold(np.full((8, 8), 3.0))


def test_build_mask_planar_target():
    depth = _scene_depth()
    patch = _patch(depth)
    model = init_model(patch, REGION)
    mask = build_mask(patch, model, REGION, 4)
    expected = np.zeros((16, 16), dtype=np.uint8)
    expected[4:12, 4:12] = 1
    np.testing.assert_array_equal(mask.values, expected)
    assert mask.support_fraction == 1.0
    assert mask.region == (4, 4, 12, 12)


def test_build_mask_full_occlusion():
    model = init_model(_patch(_scene_depth()), REGION)
    occluded = _scene_depth(target=3500.0)
    mask = build_mask(_patch(occluded), model, REGION, 4)
    assert mask.support_fraction == 0.0


def test_build_mask_half_occlusion():
    model = init_model(_patch(_scene_depth()), REGION)
    depth = _scene_depth()
    depth[16:48, 16:32] = 1000.0
    mask = build_mask(_patch(depth), model, REGION, 4)
    assert mask.support_fraction == pytest.approx(0.5, abs=0.05)


def test_build_mask_ignores_rgb():
    depth = _scene_depth()
    model = init_model(_patch(depth), REGION)
    rng = np.random.default_rng(3)
    a = build_mask(_patch(depth), model, REGION, 4)
    b = build_mask(
        _patch(depth, rng.uniform(0, 255, (64, 64, 3))), model, REGION, 4
    )
    np.testing.assert_array_equal(a.values, b.values)


def test_build_mask_fixed_threshold():
    depth = _scene_depth()
    model = init_model(_patch(depth), REGION)
    mask = build_mask(_patch(depth), model, REGION, 4, mask_threshold=1.0)
    assert mask.support_fraction == 1.0
    assert mask.active_cells == 64


def test_fixed_threshold_is_monotone():
    model = DepthModel(2000.0, 100.0, 3000.0, 400.0)
    depth = np.full((8, 8), 2600.0)
    before = build_mask(_patch(depth), model, (0, 0, 8, 8), 4,
                        mask_threshold=1.0)
    depth[:4, :4] = 2050.0
    after = build_mask(_patch(depth), model, (0, 0, 8, 8), 4,
                       mask_threshold=1.0)
    assert np.all(after.values >= before.values)
    assert after.values[0, 0] == 1


def test_mask_support_extremes():
    assert Mask.full((8, 8), (2, 2, 6, 6)).support_fraction == 1.0
    empty = Mask.from_values(np.zeros((8, 8)), (2, 2, 6, 6))
    assert empty.support_fraction == 0.0


def test_box_region_maps_through_patch_scale():
    patch = Patch(
        pixels=np.zeros((32, 64, 3), dtype=np.float32),
        depth=np.zeros((32, 64), dtype=np.float32),
        origin=BoundingBox(100, 50, 128, 64)
    )
    region = box_region(patch, BoundingBox(132, 66, 64, 32))
    assert region == (8, 16, 24, 48)


def _update_fixture(theta: float, gamma: float):
    depth = np.full((16, 16), 3000.0)
    depth[4:12, 4:12] = 2000.0
    depth[4:12, 4:8] = 2100.0
    values = np.zeros((4, 4))
    values[1:3, 1:3] = 1
    mask = Mask.from_values(values, (1, 1, 3, 3))
    model = DepthModel(1000.0, 300.0, 5000.0, 900.0, theta, gamma)
    return _patch(depth), mask, model


def test_update_model_full_replacement():
    patch, mask, model = _update_fixture(1.0, 1.0)
    updated = update_model(model, patch, mask)
    assert updated.mu_fg == pytest.approx(2050.0)
    assert updated.sigma_fg == pytest.approx(50.0)
    assert updated.mu_bg == pytest.approx(3000.0)
    assert updated.sigma_bg == 20.0


def test_update_model_zero_rates():
    patch, mask, model = _update_fixture(0.0, 0.0)
    assert update_model(model, patch, mask) == model


def test_update_model_recurrence():
    patch, mask, model = _update_fixture(0.95, 0.20)
    gap = model.mu_fg - 2050.0
    sigma_gap = model.sigma_fg - 50.0

    for n in range(1, 8):
        model = update_model(model, patch, mask)
        assert model.mu_fg - 2050.0 == pytest.approx(gap * 0.05 ** n, abs=1e-9)
        assert model.sigma_fg - 50.0 == pytest.approx(
            sigma_gap * 0.8 ** n, abs=1e-9
        )
        assert model.sigma_fg >= 20.0 and model.sigma_bg >= 20.0


def test_update_model_empty_foreground():
    patch, _, model = _update_fixture(0.95, 0.20)
    empty = Mask.from_values(np.zeros((4, 4)), (1, 1, 3, 3))
    assert update_model(model, patch, empty) == model


def test_build_mask_missing_depth_is_background():
    depth = np.tile(np.linspace(2000.0, 3000.0, 64), (64, 1))
    depth[16:48, 16:48] = 0.0
    patch = _patch(depth)
    model = DepthModel(1000.0, 400.0, 2500.0, 400.0)

    ratio = probability_ratio_image(patch, model)
    assert otsu_threshold(ratio[depth > 0]) < 0.0

    mask = build_mask(patch, model, REGION, 4)
    assert mask.support_fraction == 0.0
    assert not mask.values[4:12, 4:12].any()


def test_update_model_gate_sends_outliers_to_background():
    patch, mask, _ = _update_fixture(1.0, 1.0)
    depth = patch.depth.copy()
    depth[4:12, 4:6] = 1000.0
    patch = _patch(depth)
    model = DepthModel(2000.0, 100.0, 3000.0, 20.0, 1.0, 1.0)

    gated = update_model(model, patch, mask, gate=3.0)
    assert gated.mu_fg == pytest.approx((16 * 2100.0 + 32 * 2000.0) / 48)
    assert gated.mu_bg == pytest.approx((192 * 3000.0 + 16 * 1000.0) / 208)

    plain = update_model(model, patch, mask)
    assert plain.mu_fg == pytest.approx(1775.0)
    assert plain.mu_bg == pytest.approx(3000.0)


def _occluder_sweep(gate):
    model = DepthModel(2000.0, 150.0, 3500.0, 100.0)
    supports = []

    for covered in (8, 16, 24, 32):
        depth = np.full((64, 64), 3500.0)
        depth[16:48, 16:48] = 2000.0
        depth[8:56, :16 + covered] = 1000.0
        patch = _patch(depth)
        mask = build_mask(patch, model, REGION, 4)
        supports.append(mask.support_fraction)
        model = update_model(model, patch, mask, gate=gate)

    return supports


def test_nearer_occluder_removes_depth_support():
    assert _occluder_sweep(3.0) == pytest.approx([1.0, 0.5, 0.25, 0.0])


def test_ungated_model_follows_the_occluder():
    assert _occluder_sweep(None)[-1] == 1.0
