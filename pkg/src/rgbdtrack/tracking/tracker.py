"""Depth masked correlation filter tracker.

Each visible frame the filter is evaluated at a few scales around the last
position, the depth mask is computed at the new position and the occlusion
test runs. Visible frames update the depth model, retrain the masked filter
and blend it into the model. Occluded frames freeze every model and search
the whole frame until the target is found again.
"""
import dataclasses
import numpy as np
from dataclasses import dataclass
from typing import (
    List,
    Optional,
    Sequence,
    Tuple
)
from .config import TrackerConfig
from .dcf import (
    FilterBank,
    ResponseMap,
    default_sigma,
    make_desired_output,
    respond,
    train_closed_form,
    update_model as blend_filters
)
from .depth_mask import (
    DepthModel,
    Mask,
    box_region,
    build_mask,
    cell_region,
    init_model,
    update_model as update_depth_model
)
from .features import (
    FeatureStack,
    compose,
    get_table
)
from .imaging import (
    BoundingBox,
    Frame,
    Patch,
    extract_patch
)
from .masked_filter import solve_masked
from .occlusion import (
    OcclusionState,
    ResponseHistory,
    detect_occlusion,
    record_response,
    redetect
)
from ..core.exceptions import (
    DepthInitializationError,
    TrackingError
)
from ..core.utils import get_arrays_checksum


@dataclass(frozen=True, eq=False)
class TrackerState:
    """Everything the tracker carries from one frame to the next.

    Attributes:
        position (Tuple[float, float]): Target center ``(cx, cy)``.
        size (Tuple[float, float]): Target ``(w, h)``.
        filter (FilterBank): Filter model.
        depth_model (Optional[DepthModel]): Depth distributions, ``None``
            when the first frame had no valid depth in the box.
        history (ResponseHistory): Peak responses of the visible frames.
        occlusion (OcclusionState): Tracking or occluded mode.
        mask (Mask): Last computed mask.
        config (TrackerConfig): Parameters.
        template (Tuple[int, int]): Search patch ``(w, h)`` in pixels.
        frame_index (int): Index of the last processed frame.
        response (float): Last peak response.
        depth_fallback (bool): ``True`` if masking is disabled because the
            first frame had no depth for the target.
    """
    position: Tuple[float, float]
    size: Tuple[float, float]
    filter: FilterBank
    depth_model: Optional[DepthModel]
    history: ResponseHistory
    occlusion: OcclusionState
    mask: Mask
    config: TrackerConfig
    template: Tuple[int, int]
    frame_index: int
    response: float
    depth_fallback: bool = False

    @property
    def box(self) -> BoundingBox:
        return BoundingBox.from_center(self.position, self.size)

    @property
    def occluded(self) -> bool:
        return self.occlusion.occluded

    @property
    def running_mean(self) -> float:
        return self.history.running_mean

    def model_fingerprint(self) -> str:
        """Checksum of the filter, the depth model and the history."""
        arrays = [self.filter.h_hat, np.asarray(self.history.buffer)]

        if self.depth_model is not None:
            model = self.depth_model
            arrays.append(
                np.array(
                    [model.mu_fg, model.sigma_fg, model.mu_bg, model.sigma_bg]
                )
            )

        return get_arrays_checksum(arrays)


def template_shape(
        size: Tuple[float, float],
        padding: float,
        template_size: int,
        cell_size: int
) -> Tuple[int, int]:
    """Search patch ``(w, h)`` in pixels.

    The longer padded side is resampled to ``template_size`` and both sides
    are rounded to an even number of cells.
    """
    step = 2 * cell_size
    region_w, region_h = size[0] * padding, size[1] * padding
    scale = template_size / max(region_w, region_h)

    def _round(v: float) -> int:
        return max(2 * step, int(round(v / step)) * step)

    return (_round(region_w * scale), _round(region_h * scale))


def _mask_or_box(mask: Mask) -> Mask:
    """Replaces an empty mask with the bounding box cells."""
    if mask.active_cells > 0:
        return mask

    r0, c0, r1, c1 = mask.region
    values = np.zeros_like(mask.values)
    values[r0:r1, c0:c1] = 1
    return Mask.from_values(values, mask.region)


def _compute_mask(
        patch: Patch,
        box: BoundingBox,
        model: Optional[DepthModel],
        config: TrackerConfig
) -> Mask:
    region = box_region(patch, box)
    shape = (
        patch.shape[0] // config.cell_size, patch.shape[1] // config.cell_size
    )

    if model is None:
        return Mask.full(shape, cell_region(region, config.cell_size))

    return build_mask(
        patch,
        model,
        region,
        config.cell_size,
        ratio_clip=config.ratio_clip,
        mask_threshold=config.mask_threshold
    )


def _train(
        features: FeatureStack,
        y_hat: np.ndarray,
        mask: Mask,
        config: TrackerConfig,
        previous: Optional[FilterBank] = None
) -> FilterBank:
    if not config.use_masking:
        return train_closed_form(features, y_hat, config.lam, psi=config.psi)

    return solve_masked(
        features,
        y_hat,
        _mask_or_box(mask),
        config.admm,
        lam=config.lam,
        psi=config.psi,
        h_init=previous if config.warm_start else None
    )


def init(
        frame: Frame,
        box: BoundingBox,
        config: Optional[TrackerConfig] = None
) -> TrackerState:
    """Starts tracking ``box`` in ``frame``.

    Args:
        frame (Frame): First frame.
        box (BoundingBox): Initial target box.
        config (Optional[TrackerConfig]): Parameters. Defaults are used when
            ``None``.

    Returns:
        TrackerState: Initial state, with the response of the filter on its
            own training patch as the first history sample.

    Raises:
        InvalidGeometryError: If the box degenerates to an empty region.
    """
    config = TrackerConfig() if config is None else config
    table = get_table(config.features) if config.use_color_names else None
    template = template_shape(
        box.size, config.padding, config.template_size, config.cell_size
    )
    patch = extract_patch(
        frame, box.center, box.size, config.padding, template
    )
    features = compose(patch, config.features, table=table)
    y_hat = make_desired_output(
        features.shape, default_sigma(features.shape)
    )

    try:
        model = init_model(
            patch,
            box_region(patch, box),
            theta=config.theta,
            gamma=config.gamma,
            sigma_min=config.sigma_min
        )
        fallback = False

    except DepthInitializationError:
        model, fallback = None, True

    mask = _compute_mask(patch, box, model, config)
    bank = _train(features, y_hat, mask, config)
    r_max = respond(bank, features).peak.value

    return TrackerState(
        position=box.center,
        size=box.size,
        filter=bank,
        depth_model=model,
        history=record_response(
            ResponseHistory(capacity=config.occlusion.history_length), r_max
        ),
        occlusion=OcclusionState(),
        mask=mask,
        config=config,
        template=template,
        frame_index=frame.index,
        response=r_max,
        depth_fallback=fallback
    )


def _evaluate_scales(
        state: TrackerState,
        frame: Frame,
        scale_factors: Sequence[float]
) -> List[Tuple[float, float, ResponseMap, Patch]]:
    config = state.config
    table = get_table(config.features) if config.use_color_names else None
    candidates = []

    for factor in scale_factors:
        size = (state.size[0] * factor, state.size[1] * factor)
        patch = extract_patch(
            frame, state.position, size, config.padding, state.template
        )
        response = respond(
            state.filter, compose(patch, config.features, table=table)
        )
        weight = 1.0 if factor == 1.0 else config.scale_penalty
        candidates.append(
            (factor, weight * response.peak.value, response, patch)
        )

    return candidates


def scale_search(
        state: TrackerState,
        frame: Frame,
        scale_factors: Optional[Sequence[float]] = None
) -> Tuple[float, ResponseMap]:
    """Evaluates the filter at several target scales.

    Responses of every scale other than ``1.0`` are weighted by
    ``scale_penalty`` before taking the best one.

    Args:
        state (TrackerState): Current state.
        frame (Frame): New frame.
        scale_factors (Optional[Sequence[float]]): Scales to evaluate. The
            configured ones are used when ``None``.

    Returns:
        Tuple[float, ResponseMap]: Best scale and its response.
    """
    factors = (
        state.config.scale_factors if scale_factors is None
        else scale_factors
    )
    best = max(_evaluate_scales(state, frame, factors), key=lambda c: c[1])
    return best[0], best[2]


def _track_visible(
        state: TrackerState,
        frame: Frame
) -> Tuple[TrackerState, Optional[BoundingBox], bool]:
    config = state.config
    table = get_table(config.features) if config.use_color_names else None
    best = max(
        _evaluate_scales(state, frame, config.scale_factors),
        key=lambda c: c[1]
    )
    factor, _, response, patch = best
    r_max = response.peak.value

    d_row, d_col = response.displacement
    sx, sy = patch.scale
    position = (
        state.position[0] + d_col * config.cell_size / sx,
        state.position[1] + d_row * config.cell_size / sy
    )
    size = (state.size[0] * factor, state.size[1] * factor)
    box = BoundingBox.from_center(position, size)

    patch = extract_patch(
        frame, position, size, config.padding, state.template
    )
    model = state.depth_model
    masking = config.use_masking or config.use_occlusion
    mask = _compute_mask(patch, box, model if masking else None, config)

    if config.use_occlusion and detect_occlusion(
        r_max, state.history, mask, config.occlusion
    ):
        occluded = dataclasses.replace(
            state,
            occlusion=OcclusionState(occluded=True, frames_occluded=1),
            mask=mask,
            frame_index=frame.index,
            response=r_max
        )
        return occluded, None, True

    if model is not None and masking:
        model = update_depth_model(
            model, patch, mask, gate=config.depth_gate
        )

    features = compose(patch, config.features, table=table)
    bank = _train(
        features, state.filter.y_hat, mask, config, previous=state.filter
    )

    visible = dataclasses.replace(
        state,
        position=position,
        size=size,
        filter=blend_filters(state.filter, bank, config.psi),
        depth_model=model,
        history=record_response(state.history, r_max),
        mask=mask,
        frame_index=frame.index,
        response=r_max
    )
    return visible, box, False


def _track_occluded(
        state: TrackerState,
        frame: Frame
) -> Tuple[TrackerState, Optional[BoundingBox], bool]:
    config = state.config
    detection = redetect(
        frame,
        state.filter,
        state.history,
        config.occlusion,
        config.features,
        state.size,
        config.padding,
        table=get_table(config.features) if config.use_color_names else None
    )

    if detection is None:
        occlusion = OcclusionState(
            occluded=True,
            frames_occluded=state.occlusion.frames_occluded + 1
        )
        still = dataclasses.replace(
            state, occlusion=occlusion, frame_index=frame.index
        )
        return still, None, True

    recovered = dataclasses.replace(
        state,
        position=detection.center,
        occlusion=OcclusionState(),
        frame_index=frame.index,
        response=detection.r_max
    )
    return recovered, recovered.box, False


def track(
        state: TrackerState,
        frame: Frame
) -> Tuple[TrackerState, Optional[BoundingBox], bool]:
    """Processes one frame.

    Args:
        state (TrackerState): State after the previous frame.
        frame (Frame): Next frame. Its index must be larger than the last
            processed one.

    Returns:
        Tuple[TrackerState, Optional[BoundingBox], bool]: New state, target
            box (``None`` while occluded) and occlusion flag.

    Raises:
        TrackingError: If the frame cannot be processed. ``state`` is left
            untouched and remains usable for the next frame.
    """
    if frame.index <= state.frame_index:
        raise TrackingError(
            f"Frame index {frame.index} does not follow {state.frame_index}"
        )

    try:
        if state.occluded:
            return _track_occluded(state, frame)

        return _track_visible(state, frame)

    except TrackingError:
        raise

    except Exception as e:
        raise TrackingError(
            f"Frame {frame.index} could not be tracked: {e}"
        ) from e
