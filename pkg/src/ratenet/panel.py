"""Panel ingestion, cleaning, detrending, and stationarity screening.

A panel is a date-aligned matrix of interest-rate series (one column per
label). Missing observations are carried as NaN until :func:`clean` fills
or drops them; every downstream module assumes a complete panel.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
import pandas as pd
from statsmodels.tools.sm_exceptions import InterpolationWarning
from statsmodels.tsa.stattools import adfuller, kpss

from .errors import DegenerateSeriesError, EmptyPanelError, LoadError, RateNetError

__all__ = [
    "Panel",
    "StationarityRecord",
    "StationarityReport",
    "load_csv",
    "load_meta",
    "clean",
    "detrend_ma",
    "adf_test",
    "kpss_test",
    "stationarity_screen",
]

# KPSS critical values (level stationarity), 10% / 5% / 2.5% / 1%
KPSS_CRIT = ((0.10, 0.347), (0.05, 0.463), (0.025, 0.574), (0.01, 0.739))


@dataclass(frozen=True)
class Panel:
    """Immutable date-aligned matrix of time series.

    values is T x n, one column per entry of labels; missing cells are NaN.
    meta maps a label to tags such as {"category": "R", "term": "7d"}.
    """

    labels: tuple[str, ...]
    dates: np.ndarray  # datetime64[D], strictly increasing
    values: np.ndarray  # float, shape (T, n)
    meta: dict[str, dict] = field(default_factory=dict)

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate labels in panel")
        if self.values.ndim != 2 or self.values.shape[1] != len(self.labels):
            raise ValueError(
                f"values shape {self.values.shape} does not match {len(self.labels)} labels"
            )
        if len(self.dates) != self.values.shape[0]:
            raise ValueError("dates length does not match number of rows")
        if len(self.dates) > 1 and not (np.diff(self.dates) > np.timedelta64(0, "D")).all():
            raise ValueError("dates must be strictly increasing")

    @property
    def n_series(self) -> int:
        return len(self.labels)

    @property
    def n_obs(self) -> int:
        return self.values.shape[0]

    def column(self, label: str) -> np.ndarray:
        return self.values[:, self.index(label)]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"label {label!r} not in panel") from None

    def subset(self, labels) -> "Panel":
        """Panel restricted to the given labels, in the given order."""
        labels = tuple(labels)
        idx = [self.index(lab) for lab in labels]
        meta = {lab: self.meta[lab] for lab in labels if lab in self.meta}
        return Panel(labels, self.dates, self.values[:, idx], meta)

    def slice_dates(self, start, end) -> "Panel":
        """Panel restricted to dates in [start, end] (inclusive)."""
        start = np.datetime64(start, "D")
        end = np.datetime64(end, "D")
        mask = (self.dates >= start) & (self.dates <= end)
        return replace(self, dates=self.dates[mask], values=self.values[mask])

    def to_csv(self, path, date_column: str = "date") -> None:
        df = pd.DataFrame(self.values, columns=list(self.labels))
        df.insert(0, date_column, pd.DatetimeIndex(self.dates).strftime("%Y-%m-%d"))
        df.to_csv(path, index=False)


@dataclass(frozen=True)
class StationarityRecord:
    label: str
    adf_statistic: float
    adf_pvalue: float
    kpss_statistic: float
    kpss_pvalue: float
    stationary: bool


@dataclass(frozen=True)
class StationarityReport:
    alpha: float
    records: tuple[StationarityRecord, ...]

    @property
    def nonstationary_labels(self) -> tuple[str, ...]:
        return tuple(r.label for r in self.records if not r.stationary)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([vars(r) for r in self.records])


def load_csv(path, date_column: str = "date", meta: dict | None = None) -> Panel:
    """Read a panel from CSV: header row, one date column, numeric series columns.

    Empty or non-numeric cells become NaN. Duplicate series labels and
    unparseable dates are load errors.
    """
    try:
        with open(path) as fh:
            header_line = fh.readline().rstrip("\r\n")
    except OSError as exc:
        raise LoadError(f"cannot read {path}: {exc}") from exc
    cols = [c.strip().strip('"') for c in header_line.split(",")]
    if date_column not in cols:
        raise LoadError(f"date column {date_column!r} not found in header {cols}")
    series_cols = [c for c in cols if c != date_column]
    dupes = {c for c in series_cols if series_cols.count(c) > 1}
    if dupes:
        raise LoadError(f"duplicate series labels: {sorted(dupes)}")
    if any(not c for c in cols):
        raise LoadError("malformed header: blank column names")

    df = pd.read_csv(path)
    df.columns = cols
    try:
        dates = pd.to_datetime(df[date_column], format="ISO8601").to_numpy(dtype="datetime64[D]")
    except (ValueError, TypeError) as exc:
        raise LoadError(f"unparseable date in column {date_column!r}: {exc}") from exc
    values = np.full((len(df), len(series_cols)), np.nan)
    for j, c in enumerate(series_cols):
        values[:, j] = pd.to_numeric(df[c], errors="coerce").to_numpy(dtype=float)
    order = np.argsort(dates, kind="stable")
    dates, values = dates[order], values[order]
    if len(dates) > 1 and (np.diff(dates) == np.timedelta64(0, "D")).any():
        raise LoadError("duplicate dates in panel")
    return Panel(tuple(series_cols), dates, values, meta or {})


def load_meta(path) -> dict[str, dict]:
    """Read the sidecar metadata file: JSON mapping label -> {category, term}."""
    with open(path) as fh:
        meta = json.load(fh)
    if not isinstance(meta, dict):
        raise LoadError("metadata file must be a JSON object mapping label -> tags")
    return meta


def clean(panel: Panel, min_length: int = 756, max_missing_frac: float = 0.1) -> Panel:
    """Drop short or gappy series, then fill what remains.

    A series survives if it has at least min_length non-missing observations
    and its missing fraction (over its own first..last observed range) is at
    most max_missing_frac. Interior gaps are filled by carrying the last
    observation forward; rows before the latest common start date are trimmed.
    Dropping and trimming are iterated to a fixed point so the operation is
    idempotent.
    """
    sub = panel
    while True:
        keep = []
        for j, lab in enumerate(sub.labels):
            col = sub.values[:, j]
            obs = ~np.isnan(col)
            n_obs = int(obs.sum())
            if n_obs < min_length:
                continue
            first, last = np.flatnonzero(obs)[[0, -1]]
            span = last - first + 1
            if 1.0 - n_obs / span > max_missing_frac:
                continue
            keep.append(lab)
        if not keep:
            raise EmptyPanelError("cleaning removed every series")
        trimmed = sub.subset(keep)
        # trim to the latest first-observation across surviving series
        starts = [
            np.flatnonzero(~np.isnan(trimmed.values[:, j]))[0] for j in range(trimmed.n_series)
        ]
        start = max(starts)
        trimmed = Panel(
            trimmed.labels, trimmed.dates[start:], trimmed.values[start:], trimmed.meta
        )
        if len(keep) == sub.n_series and start == 0:
            break
        sub = trimmed
    # last observation carried forward for interior (and trailing) gaps
    values = pd.DataFrame(trimmed.values).ffill().to_numpy()
    if np.isnan(values).any():
        raise EmptyPanelError("missing values remain after fill")  # pragma: no cover
    return Panel(trimmed.labels, trimmed.dates, values, trimmed.meta)


def detrend_ma(panel: Panel, window: int = 100) -> Panel:
    """Subtract each series' trailing moving average of the given window.

    Output row t is input(t) minus the mean of the window ending at t; the
    first window-1 rows have no full window and are dropped.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    if panel.n_obs <= window:
        raise RateNetError(
            f"series too short to detrend: need > {window} rows, have {panel.n_obs} "
            f"(labels {panel.labels[:3]}...)"
        )
    if np.isnan(panel.values).any():
        bad = [lab for j, lab in enumerate(panel.labels) if np.isnan(panel.values[:, j]).any()]
        raise RateNetError(f"detrend requires a complete panel; missing values in {bad}")
    csum = np.cumsum(panel.values, axis=0)
    ma = (csum[window - 1 :] - np.vstack([np.zeros(panel.n_series), csum[:-window]])) / window
    out = panel.values[window - 1 :] - ma
    return Panel(panel.labels, panel.dates[window - 1 :], out, panel.meta)


def adf_test(series, max_lag: int = 10) -> tuple[float, float]:
    """Augmented Dickey-Fuller test with constant; lag order by BIC over 0..max_lag.

    Returns (statistic, MacKinnon approximate p-value). Small p-value rejects
    the unit root.
    """
    x = np.asarray(series, dtype=float)
    if len(x) < 25 + max_lag:
        raise RateNetError(f"ADF needs at least {25 + max_lag} observations, got {len(x)}")
    if np.ptp(x) == 0:
        raise DegenerateSeriesError("ADF test on a constant series")
    stat, pvalue, *_ = adfuller(x, maxlag=max_lag, regression="c", autolag="BIC")
    return float(stat), float(pvalue)


def kpss_bandwidth(n: int) -> int:
    """Newey-West bandwidth floor(4 * (T/100)^(1/4)) used when none is given."""
    return int(np.floor(4.0 * (n / 100.0) ** 0.25))


def kpss_test(series, bandwidth: int | None = None) -> tuple[float, float]:
    """KPSS level-stationarity test with Bartlett-kernel long-run variance.

    The p-value is interpolated from the classical 10/5/2.5/1% table and
    therefore clamped to [0.01, 0.10]. Small p-value rejects stationarity.
    """
    x = np.asarray(series, dtype=float)
    if len(x) < 25:
        raise RateNetError(f"KPSS needs at least 25 observations, got {len(x)}")
    if np.ptp(x) == 0:
        raise DegenerateSeriesError("KPSS test on a constant series")
    nlags = kpss_bandwidth(len(x)) if bandwidth is None else int(bandwidth)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", InterpolationWarning)
        stat, pvalue, *_ = kpss(x, regression="c", nlags=nlags)
    return float(stat), float(min(max(pvalue, 0.01), 0.10))


def stationarity_screen(panel: Panel, alpha: float = 0.05, max_lag: int = 10) -> StationarityReport:
    """Run ADF and KPSS on every series of a (detrended) panel.

    A series counts as stationary when ADF rejects the unit root at alpha
    and KPSS fails to reject stationarity at alpha.
    """
    records = []
    for lab in panel.labels:
        col = panel.column(lab)
        adf_s, adf_p = adf_test(col, max_lag=max_lag)
        kpss_s, kpss_p = kpss_test(col)
        records.append(
            StationarityRecord(
                label=lab,
                adf_statistic=adf_s,
                adf_pvalue=adf_p,
                kpss_statistic=kpss_s,
                kpss_pvalue=kpss_p,
                stationary=bool(adf_p < alpha and kpss_p > alpha),
            )
        )
    return StationarityReport(alpha=alpha, records=tuple(records))
