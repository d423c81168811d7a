"""Time-domain Granger causality: pairwise, conditional, and the all-pairs scan.

The statistic is the log ratio of reduced to full residual variance for the
target equation; under the null of no causality, nobs * statistic is
asymptotically chi-square with one degree of freedom per omitted lag.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import pandas as pd
from scipy import stats

from .errors import DegenerateSeriesError, NumericalConsistencyError
from .panel import Panel
from .var import _ols_residuals, check_dof, lag_design

__all__ = [
    "GcStat",
    "EdgeList",
    "pairwise_gc",
    "conditional_gc",
    "significance",
    "all_pairs_conditional",
]

CORRECTIONS = ("none", "bonferroni", "bh")

# statistics this far below zero are rounding noise; further below is a bug
NEG_TOL = 1e-12


@dataclass(frozen=True)
class GcStat:
    """One directed causality test: does source help predict target?"""

    source: str
    target: str
    conditioning: tuple[str, ...]
    statistic: float
    pvalue: float
    order: int
    nobs: int


@dataclass(frozen=True)
class EdgeList:
    """All tested ordered pairs plus the significance decisions."""

    stats: tuple[GcStat, ...]
    alpha: float
    correction: str
    significant: tuple[bool, ...]

    @property
    def edges(self) -> tuple[GcStat, ...]:
        return tuple(s for s, sig in zip(self.stats, self.significant) if sig)

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {
                "source": s.source,
                "target": s.target,
                "statistic": s.statistic,
                "pvalue": s.pvalue,
                "significant": sig,
            }
            for s, sig in zip(self.stats, self.significant)
        ]
        return pd.DataFrame(rows, columns=["source", "target", "statistic", "pvalue", "significant"])

    def to_csv(self, path) -> None:
        self.to_frame().to_csv(path, index=False)


def _rss(resid: np.ndarray) -> float:
    return float(resid @ resid)


def _clamp_statistic(stat: float) -> float:
    if stat < -NEG_TOL:
        raise NumericalConsistencyError(
            f"negative causality statistic {stat:.3e}: reduced model fits better than full"
        )
    return max(stat, 0.0)


def _gc_from_columns(values: np.ndarray, target_col: int, source_col: int, order: int) -> float:
    """ln(RSS_reduced / RSS_full) for the target equation, dropping the
    source's lags in the reduced model. Both models share the sample that
    drops the first `order` rows."""
    n = values.shape[1]
    Y, X = lag_design(values, order)
    y = Y[:, target_col]
    _, resid_full = _ols_residuals(X=X, Y=y[:, None])
    keep = [k * n + j for k in range(order) for j in range(n) if j != source_col]
    _, resid_red = _ols_residuals(X=X[:, keep], Y=y[:, None])
    rss_full, rss_red = _rss(resid_full[:, 0]), _rss(resid_red[:, 0])
    if rss_full <= 0:
        raise DegenerateSeriesError("zero residual variance in full model")
    return _clamp_statistic(float(np.log(rss_red / rss_full)))


def significance(statistic: float, nobs: int, order: int) -> float:
    """Upper chi-square(order) tail at nobs * statistic (large-sample LR test)."""
    if statistic < 0:
        raise ValueError("statistic must be non-negative")
    return float(stats.chi2.sf(nobs * statistic, df=order))


def conditional_gc(panel: Panel, x: str, y: str, cond=(), order: int = 1) -> GcStat:
    """Causality from y to x given the past of every series in cond.

    Full model regresses x on lags of x, y, and all of cond; the reduced
    model omits y's lags. With empty cond this is exactly the pairwise test.
    """
    cond = tuple(cond)
    if x == y:
        raise ValueError("source and target must differ")
    if x in cond or y in cond:
        raise ValueError(f"conditioning set overlaps the tested pair: {set(cond) & {x, y}}")
    sub = panel.subset((x, y) + cond)
    values = sub.values - sub.values.mean(axis=0)
    for j, lab in enumerate(sub.labels):
        if np.ptp(values[:, j]) == 0:
            raise DegenerateSeriesError(f"series {lab!r} is constant")
    n = sub.n_series
    nobs = sub.n_obs - order
    check_dof(nobs, n, order)
    stat = _gc_from_columns(values, target_col=0, source_col=1, order=order)
    return GcStat(
        source=y,
        target=x,
        conditioning=cond,
        statistic=stat,
        pvalue=significance(stat, nobs, order),
        order=order,
        nobs=nobs,
    )


def pairwise_gc(panel: Panel, x: str, y: str, order: int = 1) -> GcStat:
    """Unconditional (bivariate) causality from y to x."""
    return conditional_gc(panel, x, y, cond=(), order=order)


def _apply_correction(pvalues: np.ndarray, alpha: float, correction: str) -> np.ndarray:
    m = len(pvalues)
    if correction == "none" or m == 0:
        return pvalues < alpha
    if correction == "bonferroni":
        return pvalues < alpha / m
    if correction == "bh":
        order = np.argsort(pvalues)
        thresh = alpha * (np.arange(1, m + 1)) / m
        passed = pvalues[order] <= thresh
        cut = np.max(np.nonzero(passed)[0]) + 1 if passed.any() else 0
        out = np.zeros(m, dtype=bool)
        out[order[:cut]] = True
        return out
    raise ValueError(f"unknown correction {correction!r}; use one of {CORRECTIONS}")


def all_pairs_conditional(
    panel: Panel, order: int = 1, alpha: float = 0.05, correction: str = "none"
) -> EdgeList:
    """Test every ordered pair (y -> x) conditional on all remaining series.

    The full-model regression for a given target is shared across all of its
    candidate sources. Results are ordered by (source, target) label.
    """
    if correction not in CORRECTIONS:
        raise ValueError(f"unknown correction {correction!r}; use one of {CORRECTIONS}")
    labels = panel.labels
    n = len(labels)
    if n < 2:
        return EdgeList(stats=(), alpha=alpha, correction=correction, significant=())
    values = panel.values - panel.values.mean(axis=0)
    nobs = panel.n_obs - order
    check_dof(nobs, n, order)
    Y, X = lag_design(values, order)
    results: dict[tuple[str, str], GcStat] = {}
    for ti, x_lab in enumerate(labels):
        y_col = Y[:, ti][:, None]
        _, resid_full = _ols_residuals(X=X, Y=y_col, labels=labels)
        rss_full = _rss(resid_full[:, 0])
        if rss_full <= 0:
            raise DegenerateSeriesError(f"zero residual variance for target {x_lab!r}")
        for si, y_lab in enumerate(labels):
            if si == ti:
                continue
            keep = [k * n + j for k in range(order) for j in range(n) if j != si]
            _, resid_red = _ols_residuals(X=X[:, keep], Y=y_col)
            stat = _clamp_statistic(float(np.log(_rss(resid_red[:, 0]) / rss_full)))
            cond = tuple(lab for lab in labels if lab not in (x_lab, y_lab))
            results[(y_lab, x_lab)] = GcStat(
                source=y_lab,
                target=x_lab,
                conditioning=cond,
                statistic=stat,
                pvalue=significance(stat, nobs, order),
                order=order,
                nobs=nobs,
            )
    ordered = tuple(results[key] for key in sorted(results))
    pvals = np.array([s.pvalue for s in ordered])
    flags = tuple(bool(b) for b in _apply_correction(pvals, alpha, correction))
    return EdgeList(stats=ordered, alpha=alpha, correction=correction, significant=flags)
