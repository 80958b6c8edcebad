from .config import (
    AdmmConfig,
    FeatureConfig,
    OcclusionConfig,
    TrackerConfig
)
from .imaging import (
    BoundingBox,
    Frame,
    Patch,
    extract_patch,
    iou
)
from .tracker import (
    TrackerState,
    init,
    scale_search,
    track
)

__all__ = [
    "AdmmConfig",
    "BoundingBox",
    "FeatureConfig",
    "Frame",
    "OcclusionConfig",
    "Patch",
    "TrackerConfig",
    "TrackerState",
    "extract_patch",
    "init",
    "iou",
    "scale_search",
    "track"
]
