"""Vector autoregression: estimation, order selection, stability, simulation.

Estimation is per-equation least squares on the demeaned sample, which for
Gaussian innovations coincides with conditional maximum likelihood. All
downstream causality statistics are built on the residual covariances
produced here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import CollinearityError, DegreesOfFreedomError, UnstableModelError
from .panel import Panel

__all__ = [
    "VarModel",
    "OrderSelection",
    "lag_design",
    "fit_var",
    "select_order_bic",
    "is_stable",
    "companion_matrix",
    "spectral_radius",
    "simulate_var",
]

STABILITY_MARGIN = 1e-8


@dataclass(frozen=True)
class VarModel:
    """A fitted or constructed VAR(p): x_t = sum_k A_k x_{t-k} + e_t, cov(e) = sigma."""

    order: int
    coeffs: np.ndarray  # shape (p, n, n); coeffs[k-1] is A_k
    sigma: np.ndarray  # shape (n, n), symmetric PSD
    labels: tuple[str, ...]
    nobs: int  # effective sample size used in estimation (0 for constructed models)

    def __post_init__(self):
        p, n = self.order, self.n_series
        if self.coeffs.shape != (p, n, n):
            raise ValueError(f"coeffs shape {self.coeffs.shape} != ({p}, {n}, {n})")
        if self.sigma.shape != (n, n):
            raise ValueError("sigma shape mismatch")
        if not np.allclose(self.sigma, self.sigma.T, atol=1e-10):
            raise ValueError("sigma is not symmetric")
        if np.linalg.eigvalsh(self.sigma).min() < -1e-10:
            raise ValueError("sigma is not positive semi-definite")

    @property
    def n_series(self) -> int:
        return len(self.labels)

    def to_json(self, path=None) -> str:
        doc = {
            "order": self.order,
            "labels": list(self.labels),
            "coeffs": self.coeffs.tolist(),
            "sigma": self.sigma.tolist(),
            "nobs": self.nobs,
        }
        text = json.dumps(doc, indent=2)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text

    @classmethod
    def from_json(cls, source) -> "VarModel":
        if isinstance(source, (str, bytes)) and str(source).lstrip().startswith("{"):
            doc = json.loads(source)
        else:
            with open(source) as fh:
                doc = json.load(fh)
        return cls(
            order=int(doc["order"]),
            coeffs=np.asarray(doc["coeffs"], dtype=float),
            sigma=np.asarray(doc["sigma"], dtype=float),
            labels=tuple(doc["labels"]),
            nobs=int(doc.get("nobs", 0)),
        )


@dataclass(frozen=True)
class OrderSelection:
    chosen: int
    scores: dict[int, float]  # order -> BIC


def lag_design(values: np.ndarray, order: int, offset: int = 0):
    """Build the lagged design for a VAR regression.

    Returns (Y, X): Y the rows order+offset..T-1 of values, X the matching
    stacked lags [x_{t-1}, ..., x_{t-p}] with columns grouped by lag. offset
    drops extra leading rows so different orders can share a common sample.
    """
    T, n = values.shape
    start = order + offset
    if start >= T:
        raise DegreesOfFreedomError(f"no rows left after dropping {start} for lags")
    Y = values[start:]
    X = np.empty((T - start, n * order))
    for k in range(1, order + 1):
        X[:, (k - 1) * n : k * n] = values[start - k : T - k]
    return Y, X


def check_dof(T_eff: int, n: int, order: int) -> None:
    if T_eff <= n * order + 1:
        raise DegreesOfFreedomError(
            f"effective sample {T_eff} too small for {n}-variable VAR({order}): "
            f"need T - p > n*p + 1 = {n * order + 1}; reduce the order or the "
            f"number of series (e.g. analyze sub-groups)"
        )


def _ols_residuals(Y: np.ndarray, X: np.ndarray, labels=None):
    """Least-squares residuals of each column of Y on X; raises on rank deficiency."""
    coef, _, rank, _ = np.linalg.lstsq(X, Y, rcond=None)
    if rank < X.shape[1]:
        hint = ""
        if labels is not None:
            norms = np.linalg.norm(X, axis=0).reshape(-1, len(labels))
            dead = [lab for j, lab in enumerate(labels) if np.min(norms[:, j]) < 1e-12]
            if dead:
                hint = f" (degenerate series: {dead})"
        raise CollinearityError(f"singular regressor matrix in VAR fit{hint}")
    return coef, Y - X @ coef


def fit_var(panel: Panel, order: int, offset: int = 0) -> VarModel:
    """Per-equation least-squares VAR(p) fit on the demeaned panel.

    sigma is the residual cross-product matrix divided by the effective
    sample size. offset shifts the sample start (used by order selection to
    keep a common window across candidate orders).
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    values = panel.values - panel.values.mean(axis=0)
    T, n = values.shape
    T_eff = T - order - offset
    check_dof(T_eff, n, order)
    Y, X = lag_design(values, order, offset)
    coef, resid = _ols_residuals(Y, X, panel.labels)
    sigma = resid.T @ resid / T_eff
    sigma = (sigma + sigma.T) / 2
    coeffs = np.stack([coef[(k - 1) * n : k * n].T for k in range(1, order + 1)])
    return VarModel(order=order, coeffs=coeffs, sigma=sigma, labels=panel.labels, nobs=T_eff)


def select_order_bic(panel: Panel, max_order: int = 10) -> OrderSelection:
    """Pick the VAR order in 1..max_order minimizing BIC on a common sample.

    BIC(p) = ln det Sigma_hat(p) + (ln T*/T*) * p * n^2, with every candidate
    fitted on the sample that drops the first max_order rows so the scores
    are comparable. Ties break toward the smaller order.
    """
    if max_order < 1:
        raise ValueError("max_order must be >= 1")
    n = panel.n_series
    T_eff = panel.n_obs - max_order
    check_dof(T_eff, n, max_order)
    scores: dict[int, float] = {}
    for p in range(1, max_order + 1):
        model = fit_var(panel, p, offset=max_order - p)
        sign, logdet = np.linalg.slogdet(model.sigma)
        if sign <= 0:
            raise CollinearityError(f"residual covariance singular at order {p}")
        scores[p] = logdet + (np.log(T_eff) / T_eff) * p * n * n
    chosen = min(scores, key=lambda p: (scores[p], p))
    return OrderSelection(chosen=chosen, scores=scores)


def companion_matrix(model: VarModel) -> np.ndarray:
    p, n = model.order, model.n_series
    C = np.zeros((n * p, n * p))
    C[:n] = np.hstack(list(model.coeffs))
    if p > 1:
        C[n:, :-n] = np.eye(n * (p - 1))
    return C


def spectral_radius(model: VarModel) -> float:
    return float(np.abs(np.linalg.eigvals(companion_matrix(model))).max())


def is_stable(model: VarModel) -> bool:
    """True iff the companion spectral radius is below 1 (with a small margin)."""
    return spectral_radius(model) < 1.0 - STABILITY_MARGIN


def _sigma_sqrt(sigma: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError:
        # PSD but singular: symmetric square root via eigendecomposition
        w, V = np.linalg.eigh(sigma)
        return V * np.sqrt(np.clip(w, 0.0, None))


def simulate_var(
    model: VarModel, T: int, seed: int, burn_in: int = 1000, start="2008-01-01"
) -> Panel:
    """Simulate T observations from a stable VAR with Gaussian innovations.

    Deterministic given the seed; the first burn_in draws are discarded.
    Dates are synthetic consecutive days beginning at start.
    """
    if not is_stable(model):
        raise UnstableModelError(
            f"cannot simulate: companion spectral radius {spectral_radius(model):.6f} >= 1"
        )
    p, n = model.order, model.n_series
    rng = np.random.default_rng(seed)
    L = _sigma_sqrt(model.sigma)
    eps = rng.standard_normal((burn_in + T, n)) @ L.T
    out = np.zeros((p + burn_in + T, n))
    A = model.coeffs
    for t in range(p, p + burn_in + T):
        acc = eps[t - p]
        for k in range(1, p + 1):
            acc = acc + A[k - 1] @ out[t - k]
        out[t] = acc
    values = out[p + burn_in :]
    dates = np.datetime64(start, "D") + np.arange(T)
    return Panel(model.labels, dates, values)
