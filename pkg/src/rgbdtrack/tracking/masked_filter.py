"""Correlation filters with a constrained spatial support.

The filter ``h`` of every channel minimizes
``0.5 * ||y - x * (M h)||^2 + 0.5 * lam * ||h||^2`` where ``*`` is circular
correlation and ``M`` the binary mask. The problem is split with the
alternating direction method of multipliers into a Fourier domain variable
``g_hat`` and the masked spatial filter ``h`` tied by ``g_hat = F(M h)``.
Channels are solved independently and vectorized along the last axis.
"""
import numpy as np
from dataclasses import dataclass
from scipy import fft
from typing import (
    Optional,
    Tuple,
    Union
)
from .config import AdmmConfig
from .dcf import (
    FilterBank,
    features_hat,
    spatial_filters
)
from .depth_mask import Mask
from .features import FeatureStack
from ..core.exceptions import (
    InvalidGeometryError,
    InvalidMaskError,
    NumericalError
)


@dataclass(frozen=True, eq=False)
class AdmmState:
    """Solver variables after the last iteration.

    Attributes:
        g_hat (np.ndarray): ``(h_f, w_f // 2 + 1, C)`` auxiliary spectra.
        h (np.ndarray): ``(h_f, w_f, C)`` spatial filters, zero outside the
            mask.
        xi_hat (np.ndarray): Lagrange multiplier spectra, same shape as
            ``g_hat``.
        mu (float): Penalty.
    """
    g_hat: np.ndarray
    h: np.ndarray
    xi_hat: np.ndarray
    mu: float


def constraint_residual(state: AdmmState) -> float:
    """Relative violation ``||g_hat - F(M h)|| / ||g_hat||`` over all
    channels, ``0`` when both are zero.
    """
    h_hat = fft.rfft2(state.h, axes=(0, 1))
    violation = float(np.linalg.norm(state.g_hat - h_hat))
    reference = float(np.linalg.norm(state.g_hat))

    if reference == 0.0:
        return 0.0 if violation == 0.0 else float("inf")

    return violation / reference


def objective(
        x_hat: np.ndarray,
        y_hat: np.ndarray,
        h: np.ndarray,
        lam: float
) -> float:
    """Masked ridge objective of the spatial filters ``h`` summed over
    channels.
    """
    shape = h.shape[:2]
    y = fft.irfft2(y_hat, s=shape)
    h_hat = fft.rfft2(h, axes=(0, 1))
    responses = fft.irfft2(np.conj(h_hat) * x_hat, s=shape, axes=(0, 1))
    data = 0.5 * float(((y[..., None] - responses) ** 2).sum())
    return data + 0.5 * lam * float((h ** 2).sum())


def _check_finite(iteration: int, *arrays: np.ndarray) -> None:
    if not all(np.all(np.isfinite(a)) for a in arrays):
        raise NumericalError(
            f"Non-finite values in the masked solver at iteration "
            f"{iteration}"
        )


def solve_masked(
        x: FeatureStack,
        y_hat: np.ndarray,
        mask: Mask,
        config: AdmmConfig,
        lam: float = 0.01,
        psi: float = 0.03,
        h_init: Optional[FilterBank] = None,
        return_state: bool = False
) -> Union[FilterBank, Tuple[FilterBank, AdmmState]]:
    """Trains filters whose spatial support is restricted to ``mask``.

    The auxiliary variable starts at the unconstrained closed form
    solution, the multiplier at zero and the filter at the masked previous
    filter (``h_init``) or, without it, at the masked closed form solution.
    Each iteration updates ``g_hat``, then ``h``, then the multiplier, and
    grows the penalty ``mu <- min(beta * mu, mu_max)``.

    Args:
        x (FeatureStack): Windowed features.
        y_hat (np.ndarray): Desired output spectrum.
        mask (Mask): Support mask on the feature grid.
        config (AdmmConfig): Solver schedule.
        lam (float): Regularization.
        psi (float): Update rate stored with the returned filter.
        h_init (Optional[FilterBank]): Filter to warm start from.
        return_state (bool): If ``True`` the final solver state is returned
            too.

    Returns:
        Union[FilterBank, Tuple[FilterBank, AdmmState]]: Filters with
            spectra ``F(M h)``, and the state if requested.

    Raises:
        InvalidGeometryError: If shapes disagree.
        InvalidMaskError: If the mask has no active cell.
        NumericalError: If an iteration produces non-finite values.
    """
    if mask.values.shape != x.shape:
        raise InvalidGeometryError(
            f"Mask {mask.values.shape} does not match features {x.shape}"
        )

    if mask.active_cells == 0:
        raise InvalidMaskError("Mask has no active cell")

    shape = tuple(x.shape)
    m = mask.values.astype(np.float64)[..., None]
    x_hat = features_hat(x)

    if x_hat.shape[:2] != y_hat.shape:
        raise InvalidGeometryError(
            f"Features {shape} do not match the desired output spectrum "
            f"{y_hat.shape}"
        )

    energy = np.real(x_hat * np.conj(x_hat))
    xy = x_hat * np.conj(y_hat)[..., None]

    g_hat = xy / (energy + lam) if lam > 0 else xy / (energy + config.mu0)

    if h_init is not None:
        if h_init.h_hat.shape != x_hat.shape:
            raise InvalidGeometryError(
                f"Initial filter {h_init.h_hat.shape} does not match "
                f"features {x_hat.shape}"
            )

        h = m * spatial_filters(h_init)

    else:
        h = m * fft.irfft2(g_hat, s=shape, axes=(0, 1))

    xi_hat = np.zeros_like(g_hat)
    mu = config.mu0
    debug = open(config.debug_file, "a") if config.debug_file else None

    try:
        for iteration in range(1, config.iterations + 1):
            h_hat = fft.rfft2(h, axes=(0, 1))
            g_hat = (xy + mu * h_hat - xi_hat) / (energy + mu)
            h = m * fft.irfft2(
                mu * g_hat + xi_hat, s=shape, axes=(0, 1)
            ) / (lam + mu)
            h_hat = fft.rfft2(h, axes=(0, 1))
            xi_hat = xi_hat + mu * (g_hat - h_hat)
            _check_finite(iteration, g_hat, h, xi_hat)

            if debug is not None:
                residual = constraint_residual(AdmmState(g_hat, h, xi_hat, mu))
                debug.write(
                    f"{iteration},{objective(x_hat, y_hat, h, lam)!r},"
                    f"{residual!r}\n"
                )

            mu = min(config.beta * mu, config.mu_max)

    finally:
        if debug is not None:
            debug.close()

    bank = FilterBank(
        fft.rfft2(h, axes=(0, 1)), y_hat, shape, lam=lam, psi=psi
    )

    if return_state:
        return bank, AdmmState(g_hat, h, xi_hat, mu)

    return bank
