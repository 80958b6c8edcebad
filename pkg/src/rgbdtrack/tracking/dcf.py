"""Unmasked correlation filters in the Fourier domain.

Filters are stored as ``rfft2`` spectra of spatial correlation filters
``h``, so the response of a feature map ``x`` is
``r(t) = sum_n h(n) x(n + t)`` computed as ``irfft2(conj(h_hat) * x_hat)``.
Spatial arrays are indexed with the origin at ``(0, 0)``; negative offsets
wrap around.
"""
import numpy as np
from dataclasses import (
    dataclass,
    replace
)
from scipy import fft
from typing import (
    NamedTuple,
    Optional,
    Sequence,
    Tuple
)
from .features import FeatureStack
from ..core.exceptions import (
    ConfigurationError,
    InvalidGeometryError,
    NumericalError
)
from ..core.guards import is_unit_interval_or_error


@dataclass(frozen=True, eq=False)
class FilterBank:
    """Per-channel filters and the desired output they were trained for.

    Attributes:
        h_hat (np.ndarray): ``(h_f, w_f // 2 + 1, C)`` complex filter
            spectra.
        y_hat (np.ndarray): ``(h_f, w_f // 2 + 1)`` desired output spectrum.
        shape (Tuple[int, int]): Spatial shape ``(h_f, w_f)``.
        lam (float): Regularization.
        psi (float): Update rate.
    """
    h_hat: np.ndarray
    y_hat: np.ndarray
    shape: Tuple[int, int]
    lam: float = 0.01
    psi: float = 0.03

    def __post_init__(self):
        if self.lam < 0:
            raise ConfigurationError(f"'lam' must be >= 0. Found {self.lam}")

        is_unit_interval_or_error(self.psi, "psi")

        if self.h_hat.shape[:2] != self.y_hat.shape:
            raise InvalidGeometryError(
                f"Filter spectra {self.h_hat.shape[:2]} do not match the "
                f"desired output {self.y_hat.shape}"
            )

    @property
    def num_channels(self) -> int:
        return self.h_hat.shape[2]


class Peak(NamedTuple):
    row: float
    col: float
    value: float


@dataclass(frozen=True, eq=False)
class ResponseMap:
    """Correlation response and its sub-cell peak.

    Attributes:
        values (np.ndarray): ``(h_f, w_f)`` real response.
        peak (Peak): Sub-cell peak location and the response maximum.
    """
    values: np.ndarray
    peak: Peak

    @property
    def displacement(self) -> Tuple[float, float]:
        """Signed ``(d_row, d_col)`` of the peak in cells."""
        h, w = self.values.shape
        row, col = self.peak.row, self.peak.col
        return (
            row - h if row >= h / 2.0 else row,
            col - w if col >= w / 2.0 else col
        )


def default_sigma(shape: Tuple[int, int]) -> float:
    """Desired output bandwidth in cells for a ``(h_f, w_f)`` grid."""
    return float(np.sqrt(shape[0] * shape[1]) / 16.0)


def make_desired_output(shape: Tuple[int, int], sigma: float) -> np.ndarray:
    """Spectrum of a periodic Gaussian with peak 1 at ``(0, 0)``.

    Args:
        shape (Tuple[int, int]): Spatial ``(h_f, w_f)``.
        sigma (float): Standard deviation in cells.

    Returns:
        np.ndarray: ``rfft2`` of the Gaussian.

    Raises:
        ConfigurationError: If ``sigma`` is not positive.
    """
    if not sigma > 0:
        raise ConfigurationError(f"'sigma' must be positive. Found {sigma}")

    h, w = shape
    rows = np.mod(np.arange(h) + h // 2, h) - h // 2
    cols = np.mod(np.arange(w) + w // 2, w) - w // 2
    d2 = rows[:, None] ** 2 + cols[None, :] ** 2
    y = np.exp(-0.5 * d2 / sigma ** 2)
    return fft.rfft2(y)


def features_hat(x: FeatureStack) -> np.ndarray:
    """Channel-wise ``rfft2`` of a feature stack."""
    return fft.rfft2(x.channels, axes=(0, 1))


def train_closed_form(
        x: FeatureStack,
        y_hat: np.ndarray,
        lam: float,
        psi: float = 0.03
) -> FilterBank:
    """Trains independent per-channel ridge regression filters.

    Every circular shift of ``x`` is a training sample whose label is the
    matching shift of the desired output.

    Args:
        x (FeatureStack): Windowed features.
        y_hat (np.ndarray): Desired output spectrum.
        lam (float): Regularization.
        psi (float): Update rate stored with the filter.

    Returns:
        FilterBank: The trained filters.

    Raises:
        InvalidGeometryError: If shapes disagree.
        NumericalError: If ``lam == 0`` and a channel has an empty frequency
            bin.
    """
    x_hat = features_hat(x)

    if x_hat.shape[:2] != y_hat.shape:
        raise InvalidGeometryError(
            f"Features {x.shape} do not match the desired output spectrum "
            f"{y_hat.shape}"
        )

    denominator = np.real(x_hat * np.conj(x_hat)) + lam

    if np.any(denominator == 0):
        raise NumericalError(
            "Zero spectral energy in a frequency bin with lam=0"
        )

    h_hat = x_hat * np.conj(y_hat)[..., None] / denominator
    return FilterBank(h_hat, y_hat, tuple(x.shape), lam=lam, psi=psi)


def spatial_filters(bank: FilterBank) -> np.ndarray:
    """Returns the ``(h_f, w_f, C)`` spatial filters of ``bank``."""
    return fft.irfft2(bank.h_hat, s=bank.shape, axes=(0, 1))


def _subcell_offset(left: float, center: float, right: float) -> float:
    curvature = left - 2.0 * center + right

    if curvature >= 0:
        return 0.0

    return float(np.clip(0.5 * (left - right) / curvature, -0.5, 0.5))


def locate_peak(values: np.ndarray) -> Peak:
    """Integer argmax refined by 1D quadratic fits per axis."""
    h, w = values.shape
    r, c = np.unravel_index(int(np.argmax(values)), values.shape)
    center = float(values[r, c])

    dr = _subcell_offset(
        values[(r - 1) % h, c], center, values[(r + 1) % h, c]
    )
    dc = _subcell_offset(
        values[r, (c - 1) % w], center, values[r, (c + 1) % w]
    )
    return Peak(float(r) + dr, float(c) + dc, center)


def respond_hat(
        bank: FilterBank,
        x_hat: np.ndarray,
        channel_weights: Optional[Sequence[float]] = None
) -> ResponseMap:
    """Same as :func:`respond` for already transformed features."""
    if x_hat.shape != bank.h_hat.shape:
        raise InvalidGeometryError(
            f"Feature spectra {x_hat.shape} do not match filter spectra "
            f"{bank.h_hat.shape}"
        )

    if channel_weights is None:
        weights = np.full(bank.num_channels, 1.0 / bank.num_channels)

    else:
        weights = np.asarray(channel_weights, dtype=np.float64)

        if weights.shape != (bank.num_channels,):
            raise InvalidGeometryError(
                f"Expected {bank.num_channels} channel weights. Found "
                f"{weights.shape}"
            )

        if not np.isclose(weights.sum(), 1.0):
            raise ConfigurationError(
                f"Channel weights must sum to 1. Found {weights.sum()}"
            )

    spectrum = (np.conj(bank.h_hat) * x_hat) @ weights
    values = fft.irfft2(spectrum, s=bank.shape)
    return ResponseMap(values, locate_peak(values))


def respond(
        bank: FilterBank,
        x: FeatureStack,
        channel_weights: Optional[Sequence[float]] = None
) -> ResponseMap:
    """Correlation response of ``bank`` over ``x``.

    Args:
        bank (FilterBank): Filters.
        x (FeatureStack): Windowed features with the filter shape.
        channel_weights (Optional[Sequence[float]]): Per-channel weights
            summing to 1. Uniform when ``None``.

    Returns:
        ResponseMap: Response and sub-cell peak.

    Raises:
        InvalidGeometryError: If shapes or weight count disagree.
        ConfigurationError: If the weights do not sum to 1.
    """
    return respond_hat(bank, features_hat(x), channel_weights)


def update_model(
        old: FilterBank,
        new: FilterBank,
        psi: float
) -> FilterBank:
    """Linear interpolation ``psi * new + (1 - psi) * old`` of the
    filter spectra.
    """
    is_unit_interval_or_error(psi, "psi")

    if old.h_hat.shape != new.h_hat.shape:
        raise InvalidGeometryError(
            f"Cannot blend filters of shapes {old.h_hat.shape} and "
            f"{new.h_hat.shape}"
        )

    if psi == 1.0:
        h_hat = new.h_hat.copy()

    elif psi == 0.0:
        h_hat = old.h_hat.copy()

    else:
        h_hat = psi * new.h_hat + (1.0 - psi) * old.h_hat

    return replace(new, h_hat=h_hat, psi=psi)
