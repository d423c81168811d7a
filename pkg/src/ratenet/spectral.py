"""Frequency-domain causality: transfer functions, spectra, and spectral
causality profiles.

The unconditional statistic splits the target's spectrum into an intrinsic
part and a part carried by the source's innovations. The conditional case is
reduced to an unconditional one by whitening the target-plus-conditioning
block with its own fitted model and measuring what the source contributes to
the whitened spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

from .errors import (
    DegenerateSeriesError,
    NumericalConsistencyError,
    SpectralSingularityError,
    UnstableModelError,
)
from .panel import Panel
from .var import VarModel, fit_var, is_stable

__all__ = [
    "FrequencyGrid",
    "SpectralProfile",
    "transfer_function",
    "cpsd",
    "remove_instantaneous",
    "spectral_gc",
    "conditional_spectral_gc",
    "peak_frequency",
    "band_classify",
]

COND_LIMIT = 1e12
LOG_FLOOR = 1e-300
BAND_LOW = np.pi / 3
BAND_HIGH = 2 * np.pi / 3


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform grid on [0, pi] (radians per sample), endpoints included."""

    count: int = 512

    def __post_init__(self):
        if self.count < 2:
            raise ValueError("grid needs at least 2 points")

    @property
    def points(self) -> np.ndarray:
        return np.linspace(0.0, np.pi, self.count)


@dataclass(frozen=True)
class SpectralProfile:
    """A spectral causality curve f(lambda) >= 0 on a frequency grid."""

    grid: FrequencyGrid
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) != self.grid.count:
            raise ValueError("values length does not match grid")

    @property
    def peak_lambda(self) -> float:
        lam, _ = peak_frequency(self)
        return lam

    def grid_mean(self) -> float:
        """(1/pi) * integral of the profile over [0, pi] (trapezoidal)."""
        integrate = getattr(np, "trapezoid", np.trapz)
        return float(integrate(self.values, self.grid.points) / np.pi)

    def to_csv(self, path) -> None:
        pd.DataFrame({"lambda": self.grid.points, "value": self.values}).to_csv(
            path, index=False
        )

    def summary(self) -> dict:
        lam, zero = peak_frequency(self)
        return {
            "peak_lambda": lam,
            "band": band_classify(lam),
            "grid_mean": self.grid_mean(),
            "zero_power": zero,
        }


def _require_stable(model: VarModel) -> None:
    if not is_stable(model):
        raise UnstableModelError("spectral routines require a stable model")


def transfer_function(model: VarModel, grid: FrequencyGrid) -> np.ndarray:
    """H(lambda) = (I - sum_k A_k e^{-i k lambda})^{-1}, shape (grid, n, n)."""
    _require_stable(model)
    n, p = model.n_series, model.order
    lam = grid.points
    A_of_lam = np.tile(np.eye(n, dtype=complex), (len(lam), 1, 1))
    for k in range(1, p + 1):
        phase = np.exp(-1j * k * lam)[:, None, None]
        A_of_lam -= phase * model.coeffs[k - 1]
    conds = np.linalg.cond(A_of_lam)
    if np.max(conds) > COND_LIMIT:
        j = int(np.argmax(conds))
        raise SpectralSingularityError(
            f"transfer function singular near lambda={lam[j]:.4f} (cond {conds[j]:.2e})"
        )
    return np.linalg.inv(A_of_lam)


def cpsd(model: VarModel, grid: FrequencyGrid) -> np.ndarray:
    """Cross-power spectral density S(lambda) = H Sigma H*, shape (grid, n, n)."""
    H = transfer_function(model, grid)
    return H @ model.sigma @ np.conj(np.swapaxes(H, 1, 2))


def _decorrelate_target(model: VarModel, x: int) -> VarModel:
    """Zero the instantaneous covariance between series x and every other
    series via the unit-triangular similarity transform; leaves the
    autocovariance structure of series x untouched."""
    sigma = model.sigma
    if sigma[x, x] <= 0:
        raise DegenerateSeriesError("target residual variance must be positive")
    n = model.n_series
    P = np.eye(n)
    ratios = sigma[:, x] / sigma[x, x]
    ratios[x] = 0.0
    P[:, x] -= ratios
    Pinv = np.eye(n)
    Pinv[:, x] += ratios
    coeffs = np.stack([P @ A @ Pinv for A in model.coeffs])
    new_sigma = P @ sigma @ P.T
    new_sigma = (new_sigma + new_sigma.T) / 2
    new_sigma[x, :] = 0.0
    new_sigma[:, x] = 0.0
    new_sigma[x, x] = sigma[x, x]
    return VarModel(model.order, coeffs, new_sigma, model.labels, model.nobs)


def remove_instantaneous(model: VarModel, x: int, y: int) -> VarModel:
    """Transform a model so the x and y innovations are uncorrelated.

    Left-multiplies innovations by the unit lower-triangular P with
    P[y, x] = -sigma[y, x]/sigma[x, x] and maps A_k -> P A_k P^-1,
    sigma -> P sigma P^T. The x component keeps its autocovariances.
    """
    sigma = model.sigma
    if sigma[x, x] <= 0:
        raise DegenerateSeriesError("sigma[x, x] must be positive")
    if sigma[x, y] == 0.0:
        return model
    n = model.n_series
    r = sigma[y, x] / sigma[x, x]
    P = np.eye(n)
    P[y, x] = -r
    Pinv = np.eye(n)
    Pinv[y, x] = r
    coeffs = np.stack([P @ A @ Pinv for A in model.coeffs])
    new_sigma = P @ sigma @ P.T
    new_sigma = (new_sigma + new_sigma.T) / 2
    new_sigma[x, y] = 0.0
    new_sigma[y, x] = 0.0
    return VarModel(model.order, coeffs, new_sigma, model.labels, model.nobs)


def spectral_gc(model: VarModel, grid: FrequencyGrid | None = None) -> SpectralProfile:
    """Spectral causality profile from the second to the first series of a
    bivariate model: f(lambda) = ln(S_xx / (S_xx - H_xy sigma_yy H_xy*)).

    The instantaneous-causality normalization is applied internally (it is a
    no-op on models whose cross-covariance is already zero).
    """
    if model.n_series != 2:
        raise ValueError("spectral_gc requires a bivariate model")
    grid = grid or FrequencyGrid()
    norm = remove_instantaneous(model, x=0, y=1)
    H = transfer_function(norm, grid)
    s_xx = (
        np.abs(H[:, 0, 0]) ** 2 * norm.sigma[0, 0]
        + np.abs(H[:, 0, 1]) ** 2 * norm.sigma[1, 1]
    )
    intrinsic = np.abs(H[:, 0, 0]) ** 2 * norm.sigma[0, 0]
    if np.min(intrinsic) <= 0 and np.min(intrinsic) < -1e-10:
        raise NumericalConsistencyError("non-positive intrinsic spectrum")
    values = np.log(np.maximum(s_xx, LOG_FLOOR)) - np.log(np.maximum(intrinsic, LOG_FLOOR))
    return _finish_profile(values, grid)


def _finish_profile(values: np.ndarray, grid: FrequencyGrid) -> SpectralProfile:
    if np.min(values) < -0.1:
        # far beyond rounding or sampling noise: the decomposition itself failed
        raise NumericalConsistencyError(
            f"spectral causality {np.min(values):.3e} strongly negative"
        )
    return SpectralProfile(grid=grid, values=np.maximum(values, 0.0))


def conditional_spectral_gc(
    panel: Panel,
    x: str,
    y: str,
    cond=(),
    order: int = 1,
    grid: FrequencyGrid | None = None,
) -> SpectralProfile:
    """Spectral causality from y to x given the series in cond.

    Empty cond reduces to the bivariate profile. Otherwise the reduction
    runs in four stages: fit the reduced model on {x} + cond; fit the full
    model on {x, y} + cond and remove the target's instantaneous
    correlations; whiten the full-system transfer function with the inverse
    reduced transfer function; read off the share of the whitened target
    spectrum carried by y's innovations.
    """
    grid = grid or FrequencyGrid()
    cond = tuple(cond)
    if x == y:
        raise ValueError("source and target must differ")
    if x in cond or y in cond:
        raise ValueError("conditioning set overlaps the tested pair")
    if not cond:
        model = fit_var(panel.subset((x, y)), order)
        return spectral_gc(model, grid)

    try:
        reduced = fit_var(panel.subset((x,) + cond), order)
    except Exception as exc:
        raise type(exc)(f"[reduced fit] {exc}") from exc
    try:
        full = fit_var(panel.subset((x, y) + cond), order)
    except Exception as exc:
        raise type(exc)(f"[full fit] {exc}") from exc
    full = _decorrelate_target(full, x=0)
    try:
        H = transfer_function(full, grid)
        G = transfer_function(reduced, grid)
    except (UnstableModelError, SpectralSingularityError) as exc:
        raise type(exc)(f"[transfer function] {exc}") from exc

    # embed the reduced transfer function into full-system coordinates
    # (ordering: x, y, cond...), with identity in the source slot
    n = full.n_series
    m = len(grid.points)
    G_big = np.zeros((m, n, n), dtype=complex)
    red_ix = [0] + list(range(2, n))  # positions of x and cond in the full ordering
    G_big[:, 1, 1] = 1.0
    G_big[np.ix_(range(m), red_ix, red_ix)] = G
    try:
        Q = np.linalg.solve(G_big, H)
    except np.linalg.LinAlgError as exc:
        raise SpectralSingularityError(f"[whitening] reduced transfer singular: {exc}") from exc

    intrinsic = np.abs(Q[:, 0, 0]) ** 2 * full.sigma[0, 0]
    target_var = reduced.sigma[0, 0]
    values = np.log(max(target_var, LOG_FLOOR)) - np.log(np.maximum(intrinsic, LOG_FLOOR))
    return _finish_profile(values, grid)


def peak_frequency(profile: SpectralProfile) -> tuple[float, bool]:
    """Grid point with maximal power, ties toward the lowest frequency.

    Returns (lambda_star, zero_power); zero_power marks an all-zero profile,
    for which lambda_star is 0 by convention.
    """
    values = profile.values
    if len(values) == 0:
        raise ValueError("empty profile")
    j = int(np.argmax(values))
    zero_power = bool(np.max(values) <= 0.0)
    return (0.0 if zero_power else float(profile.grid.points[j])), zero_power


def band_classify(lambda_star: float, low: float = BAND_LOW, high: float = BAND_HIGH) -> str:
    """Map a peak frequency to one of three information-flow bands."""
    if not 0.0 <= lambda_star <= np.pi + 1e-12:
        raise ValueError(f"lambda {lambda_star} outside [0, pi]")
    if lambda_star < low:
        return "low"
    if lambda_star < high:
        return "medium"
    return "high"
