import numpy as np
import pytest
from rgbdtrack.core.exceptions import (
    HistoryNotReadyError,
    InvalidGeometryError,
    NumericalError
)
from rgbdtrack.tracking import tracker
from rgbdtrack.tracking.config import (
    OcclusionConfig,
    TrackerConfig
)
from rgbdtrack.tracking.depth_mask import Mask
from rgbdtrack.tracking.features import get_table
from rgbdtrack.tracking.imaging import Frame
from rgbdtrack.tracking.occlusion import (
    OcclusionState,
    ResponseHistory,
    detect_occlusion,
    record_response,
    redetect
)


def _history(*values: float, capacity: int = 100) -> ResponseHistory:
    history = ResponseHistory(capacity=capacity)

    for v in values:
        history = record_response(history, v)

    return history


def _mask(support: float) -> Mask:
    values = np.zeros((10, 10))
    values[:, :int(round(support * 10))] = 1
    return Mask.from_values(values, (0, 0, 10, 10))


def _constant_frame(width: int = 320, height: int = 240) -> Frame:
    return Frame(
        rgb=np.full((height, width, 3), 128, dtype=np.uint8),
        depth=np.full((height, width), 2000, dtype=np.uint16),
        index=1
    )


def _redetect(state, frame, config):
    return redetect(
        frame,
        state.filter,
        state.history,
        config,
        state.config.features,
        state.size,
        state.config.padding,
        table=(
            get_table(state.config.features)
            if state.config.use_color_names else None
        )
    )


def test_record_response():
    history = _history(1.0, 2.0, 3.0)
    assert history.running_mean == pytest.approx(2.0)
    assert history.buffer == (1.0, 2.0, 3.0)
    assert history.count == 3
    assert history.buffer_mean == pytest.approx(2.0)


def test_record_response_evicts_oldest():
    history = _history(1.0, 2.0, 6.0, capacity=2)
    assert history.buffer == (2.0, 6.0)
    assert history.buffer_mean == pytest.approx(4.0)
    assert history.running_mean == pytest.approx(3.0)


def test_running_mean_matches_batch_mean():
    values = np.random.default_rng(0).uniform(0.1, 2.0, 1000)
    history = _history(*values, capacity=10)
    assert abs(history.running_mean - values.mean()) <= 1e-9
    assert len(history.buffer) == 10


def test_record_response_rejects_non_finite():
    with pytest.raises(NumericalError):
        record_response(ResponseHistory(), float("nan"))

    with pytest.raises(NumericalError):
        record_response(ResponseHistory(), float("inf"))


def test_empty_history():
    with pytest.raises(HistoryNotReadyError):
        ResponseHistory().buffer_mean

    with pytest.raises(HistoryNotReadyError):
        detect_occlusion(0.1, ResponseHistory(), _mask(0.0), OcclusionConfig())


@pytest.mark.parametrize(
    "r_max, support, expected",
    [
        (0.5, 0.0, True),
        (0.5, 0.5, False),
        (0.9, 0.0, False),
        (0.9, 0.5, False)
    ]
)
def test_detect_occlusion(r_max, support, expected):
    history = _history(1.0)
    assert detect_occlusion(
        r_max, history, _mask(support), OcclusionConfig()
    ) is expected


def test_occlusion_state():
    assert not OcclusionState().occluded

    with pytest.raises(ValueError):
        OcclusionState(occluded=False, frames_occluded=2)


def test_redetect_finds_target(scene, scene_box):
    state = tracker.init(scene, scene_box)
    detection = _redetect(state, scene, OcclusionConfig())

    assert detection is not None
    cx, cy = scene_box.center
    assert abs(detection.center[0] - cx) <= 6.0
    assert abs(detection.center[1] - cy) <= 6.0
    assert detection.r_max > 0.65 * state.history.buffer_mean


def test_redetect_rejects_absent_target(scene, scene_box):
    config = TrackerConfig(use_color_names=False, use_gray=False)
    state = tracker.init(scene, scene_box, config)
    assert _redetect(state, _constant_frame(), OcclusionConfig()) is None

    # tau = 0 accepts the global peak
    detection = _redetect(state, _constant_frame(), OcclusionConfig(tau=0.0))
    assert detection is not None


def test_redetect_frame_smaller_than_window(scene, scene_box):
    state = tracker.init(scene, scene_box)

    with pytest.raises(InvalidGeometryError):
        _redetect(state, _constant_frame(100, 100), OcclusionConfig())
