"""Tracker parameter sets."""
import dataclasses
from dataclasses import (
    dataclass,
    field
)
from typing import (
    Optional,
    Tuple
)
from ..core.exceptions import ConfigurationError
from ..core.guards import is_unit_interval_or_error


@dataclass(frozen=True)
class FeatureConfig:
    """Selection of the feature channels stacked for correlation.

    Attributes:
        use_hog (bool): Include the 31 HOG channels.
        use_color_names (bool): Include the 10 Color Names channels.
        use_gray (bool): Include the zero-centered grayscale channel.
        cell_size (int): Pixels per feature cell side.
        color_names_file (Optional[str]): Binary Color Names table. The
            built-in table is used when ``None``.
    """
    use_hog: bool = True
    use_color_names: bool = True
    use_gray: bool = True
    cell_size: int = 4
    color_names_file: Optional[str] = None

    def __post_init__(self):
        if not (self.use_hog or self.use_color_names or self.use_gray):
            raise ConfigurationError("At least one feature must be enabled")

        if self.cell_size < 1:
            raise ConfigurationError(
                f"'cell_size' must be positive. Found {self.cell_size}"
            )


@dataclass(frozen=True)
class AdmmConfig:
    """Schedule of the masked filter solver.

    Attributes:
        mu0 (float): Initial penalty.
        beta (float): Penalty growth factor per iteration.
        mu_max (float): Penalty cap.
        iterations (int): Number of iterations.
        debug_file (Optional[str]): If set, one ``iteration,objective,
            residual`` line per iteration is appended to this file.
    """
    mu0: float = 5.0
    beta: float = 3.0
    mu_max: float = 20.0
    iterations: int = 4
    debug_file: Optional[str] = None

    def __post_init__(self):
        if self.mu0 <= 0:
            raise ConfigurationError(
                f"'mu0' must be positive. Found {self.mu0}"
            )

        if self.beta < 1:
            raise ConfigurationError(f"'beta' must be >= 1. Found {self.beta}")

        if self.mu_max < self.mu0:
            raise ConfigurationError(
                f"'mu_max' must be >= 'mu0'. Found {self.mu_max}"
            )

        if self.iterations < 1:
            raise ConfigurationError(
                f"'iterations' must be >= 1. Found {self.iterations}"
            )


@dataclass(frozen=True)
class OcclusionConfig:
    """Occlusion detection and recovery thresholds.

    Attributes:
        response_drop (float): Occlusion is possible when the peak response
            falls below this fraction of the running mean.
        depth_support_min (float): Occlusion is possible when fewer than this
            fraction of the bounding box cells are foreground.
        tau (float): Re-detection is accepted when the peak exceeds this
            fraction of the mean of the last responses.
        history_length (int): Number of last responses kept.
        redetect_stride (float): Window stride of the full frame search as a
            fraction of the window side.
    """
    response_drop: float = 0.65
    depth_support_min: float = 0.10
    tau: float = 0.65
    history_length: int = 100
    redetect_stride: float = 0.5

    def __post_init__(self):
        for name in ("response_drop", "depth_support_min", "redetect_stride"):
            value = getattr(self, name)

            if not 0.0 < value <= 1.0:
                raise ConfigurationError(
                    f"'{name}' must be within (0, 1]. Found {value}"
                )

        # tau = 0 is accepted and means "always accept the global peak"
        is_unit_interval_or_error(self.tau, "tau")

        if self.history_length < 1:
            raise ConfigurationError(
                "'history_length' must be positive. Found "
                f"{self.history_length}"
            )


@dataclass(frozen=True)
class TrackerConfig:
    """Complete tracker parameter set.

    Attributes:
        psi (float): Filter update rate.
        theta (float): Depth distribution mean update rate.
        gamma (float): Depth distribution standard deviation update rate.
        lam (float): Filter regularization.
        padding (float): Search region side relative to the target side.
        cell_size (int): Pixels per feature cell side.
        template_size (int): Longer side of the resampled search region in
            pixels.
        scale_factors (Tuple[float, ...]): Multiplicative scales searched
            per frame. Must contain ``1.0``.
        scale_penalty (float): Weight applied to the response of every
            scale other than ``1.0``.
        sigma_min (float): Floor of both depth standard deviations (mm).
        ratio_clip (float): Log probability ratios are clipped to
            ``[-ratio_clip, ratio_clip]`` before thresholding.
        depth_gate (Optional[float]): Depths further than this many
            foreground standard deviations from the foreground mean never
            update the foreground distribution. No gating when ``None``.
        mask_threshold (Optional[float]): Fixed probability ratio threshold.
            Otsu's method is used when ``None``.
        use_masking (bool): Constrain filters with the depth mask.
        use_occlusion (bool): Enable occlusion detection and recovery.
        warm_start (bool): Start each masked solve from the previous filter.
        use_hog (bool): Include HOG channels.
        use_color_names (bool): Include Color Names channels.
        use_gray (bool): Include the grayscale channel.
        color_names_file (Optional[str]): Binary Color Names table.
        occlusion (OcclusionConfig): Occlusion thresholds.
        admm (AdmmConfig): Masked solver schedule.
    """
    psi: float = 0.03
    theta: float = 0.95
    gamma: float = 0.20
    lam: float = 0.01
    padding: float = 2.0
    cell_size: int = 4
    template_size: int = 200
    scale_factors: Tuple[float, ...] = (0.985, 1.0, 1.015)
    scale_penalty: float = 0.99
    sigma_min: float = 20.0
    ratio_clip: float = 20.0
    depth_gate: Optional[float] = 3.0
    mask_threshold: Optional[float] = None
    use_masking: bool = True
    use_occlusion: bool = True
    warm_start: bool = True
    use_hog: bool = True
    use_color_names: bool = True
    use_gray: bool = True
    color_names_file: Optional[str] = None
    occlusion: OcclusionConfig = field(default_factory=OcclusionConfig)
    admm: AdmmConfig = field(default_factory=AdmmConfig)

    def __post_init__(self):
        for name in ("psi", "theta", "gamma", "scale_penalty"):
            is_unit_interval_or_error(getattr(self, name), name)

        if self.lam < 0:
            raise ConfigurationError(f"'lam' must be >= 0. Found {self.lam}")

        if self.padding < 1:
            raise ConfigurationError(
                f"'padding' must be >= 1. Found {self.padding}"
            )

        if self.template_size < 4 * self.cell_size:
            raise ConfigurationError(
                f"'template_size' must be at least 4 cells. Found "
                f"{self.template_size}"
            )

        if self.sigma_min <= 0 or self.ratio_clip <= 0:
            raise ConfigurationError(
                "'sigma_min' and 'ratio_clip' must be positive"
            )

        if self.depth_gate is not None and self.depth_gate <= 0:
            raise ConfigurationError(
                f"'depth_gate' must be positive. Found {self.depth_gate}"
            )

        if self.mask_threshold is not None and self.mask_threshold <= 0:
            raise ConfigurationError(
                "'mask_threshold' is a probability ratio and must be positive"
            )

        factors = tuple(float(f) for f in self.scale_factors)

        if any(f <= 0 for f in factors) or 1.0 not in factors:
            raise ConfigurationError(
                "'scale_factors' must be positive and include 1.0. Found "
                f"{factors}"
            )

        object.__setattr__(self, "scale_factors", factors)

        # Validates the feature selection as early as possible
        self.features

    @property
    def features(self) -> FeatureConfig:
        """Feature selection derived from this configuration."""
        return FeatureConfig(
            use_hog=self.use_hog,
            use_color_names=self.use_color_names,
            use_gray=self.use_gray,
            cell_size=self.cell_size,
            color_names_file=self.color_names_file
        )

    @classmethod
    def from_dict(cls, d: dict) -> "TrackerConfig":
        """Builds a configuration from a flat mapping.

        Keys mirror the dataclass fields. Occlusion keys (``response_drop``,
        ``depth_support_min``, ``tau``, ``history_length``,
        ``redetect_stride``) and solver keys (``mu0``, ``beta``, ``mu_max``,
        ``admm_iterations``, ``admm_debug_file``) are routed to the nested
        groups.

        Args:
            d (dict): Flat mapping of parameters.

        Returns:
            TrackerConfig: The configuration.

        Raises:
            ConfigurationError: If a key is unknown or a value is invalid.
        """
        occlusion_keys = {f.name for f in dataclasses.fields(OcclusionConfig)}
        admm_keys = {
            "mu0": "mu0",
            "beta": "beta",
            "mu_max": "mu_max",
            "admm_iterations": "iterations",
            "admm_debug_file": "debug_file"
        }
        top_keys = {
            f.name for f in dataclasses.fields(cls)
        } - {"occlusion", "admm"}

        top, occlusion, admm = {}, {}, {}

        for k, v in d.items():
            if k in occlusion_keys:
                occlusion[k] = v

            elif k in admm_keys:
                admm[admm_keys[k]] = v

            elif k in top_keys:
                top[k] = tuple(v) if k == "scale_factors" else v

            else:
                raise ConfigurationError(f"Unknown configuration key '{k}'")

        try:
            return cls(
                occlusion=OcclusionConfig(**occlusion),
                admm=AdmmConfig(**admm),
                **top
            )

        except TypeError as e:
            raise ConfigurationError(f"Invalid configuration: {e}") from e

    def to_dict(self) -> dict:
        """Returns the flat mapping accepted by :meth:`from_dict`."""
        d = {
            f.name: getattr(self, f.name) for f in dataclasses.fields(self)
            if f.name not in ("occlusion", "admm")
        }
        d["scale_factors"] = list(self.scale_factors)
        d.update(dataclasses.asdict(self.occlusion))
        d.update(
            {
                "mu0": self.admm.mu0,
                "beta": self.admm.beta,
                "mu_max": self.admm.mu_max,
                "admm_iterations": self.admm.iterations,
                "admm_debug_file": self.admm.debug_file
            }
        )
        return d
