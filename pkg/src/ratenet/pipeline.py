"""End-to-end studies: maturity-group analysis, rolling-window evolution,
and the single-shot full pipeline with an output manifest.
"""

from __future__ import annotations

import hashlib
import json
import re
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from . import network as net
from .causality import all_pairs_conditional
from .errors import DegreesOfFreedomError, RateNetError
from .panel import Panel, clean, detrend_ma, stationarity_screen
from .rank import RankScores, cheirank, pagerank, rank_table, top_k
from .spectral import FrequencyGrid, conditional_spectral_gc
from .var import check_dof, select_order_bic

__all__ = [
    "Config",
    "GroupSpec",
    "WindowSpec",
    "default_group_specs",
    "term_to_years",
    "assign_groups",
    "GroupResult",
    "WindowResult",
    "run_group_analysis",
    "run_rolling",
    "run_full",
]

_TERM_RE = re.compile(r"^(\d+)\s*(d|m|y)$")


@dataclass(frozen=True)
class Config:
    """All pipeline tunables; defaults follow the study's stated choices."""

    ma_window: int = 100
    min_length: int = 756  # ~3 trading years of daily data
    max_missing_frac: float = 0.1
    alpha: float = 0.05
    order: int | None = None  # None selects by BIC up to max_order
    max_order: int = 10
    correction: str = "none"
    damping: float = 0.85
    rank_tol: float = 1e-9
    grid_points: int = 512
    band_low: float = np.pi / 3
    band_high: float = 2 * np.pi / 3
    width_months: int = 36
    step_months: int = 24
    exclude_categories: tuple[str, ...] = ()
    seed: int = 0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["exclude_categories"] = list(self.exclude_categories)
        return d


@dataclass(frozen=True)
class GroupSpec:
    """A maturity bucket: series whose term in years lies in (min_years, max_years]."""

    name: str
    min_years: float
    max_years: float

    def contains(self, years: float) -> bool:
        return self.min_years < years <= self.max_years


def default_group_specs() -> tuple[GroupSpec, ...]:
    return (
        GroupSpec("short", 0.0, 1.0),
        GroupSpec("mid", 1.0, 5.0),
        GroupSpec("long", 5.0, float("inf")),
    )


@dataclass(frozen=True)
class WindowSpec:
    width_months: int = 36
    step_months: int = 24

    def windows(self, first, last) -> list[tuple[np.datetime64, np.datetime64]]:
        """Window [start, end] pairs covering [first, last]; a trailing
        incomplete window is dropped."""
        first = pd.Timestamp(first)
        last = pd.Timestamp(last)
        out = []
        start = first
        while True:
            end = start + pd.DateOffset(months=self.width_months) - pd.Timedelta(days=1)
            if end > last:
                break
            out.append((np.datetime64(start, "D"), np.datetime64(end, "D")))
            start = start + pd.DateOffset(months=self.step_months)
        return out


def term_to_years(term: str) -> float:
    m = _TERM_RE.match(term.strip().lower())
    if not m:
        raise ValueError(f"cannot parse term {term!r}")
    value, unit = int(m.group(1)), m.group(2)
    return value / 365.0 if unit == "d" else value / 12.0 if unit == "m" else float(value)


def assign_groups(panel: Panel, specs=None) -> dict[str, list[str]]:
    """Partition the panel's labels into maturity groups via term metadata.

    Series without a parseable term are excluded with a warning.
    """
    specs = specs or default_group_specs()
    groups: dict[str, list[str]] = {s.name: [] for s in specs}
    for lab in panel.labels:
        term = panel.meta.get(lab, {}).get("term")
        if term is None:
            warnings.warn(f"series {lab!r} has no term metadata; excluded from grouping")
            continue
        years = term_to_years(term)
        for spec in specs:
            if spec.contains(years):
                groups[spec.name].append(lab)
                break
        else:
            warnings.warn(f"series {lab!r} term {term!r} matches no group")
    return groups


@dataclass(frozen=True)
class GroupResult:
    name: str
    labels: tuple[str, ...]
    network: net.CausalNetwork
    pagerank: RankScores
    cheirank: RankScores

    @property
    def top(self) -> str:
        return top_k(self.cheirank, 1)[0]


@dataclass(frozen=True)
class WindowResult:
    start: np.datetime64
    end: np.datetime64
    network: net.CausalNetwork | None
    pagerank: RankScores | None
    cheirank: RankScores | None
    skipped: str | None = None  # reason, when the window had too little data

    @property
    def top(self) -> str | None:
        return top_k(self.cheirank, 1)[0] if self.cheirank else None


def _pick_order(panel: Panel, config: Config) -> int:
    if config.order is not None:
        return config.order
    return select_order_bic(panel, config.max_order).chosen


def _analyze(panel: Panel, config: Config):
    """all-pairs conditional test -> network -> both rank scores."""
    order = _pick_order(panel, config)
    edges = all_pairs_conditional(
        panel, order=order, alpha=config.alpha, correction=config.correction
    )
    graph = net.build_network(edges, panel.labels)
    pr = pagerank(graph, damping=config.damping, tol=config.rank_tol)
    cr = cheirank(graph, damping=config.damping, tol=config.rank_tol)
    return edges, graph, pr, cr, order


def run_group_analysis(
    panel: Panel, specs=None, config: Config = Config()
) -> dict[str, GroupResult]:
    """Per maturity group: conditional all-pairs network and rank scores."""
    groups = assign_groups(panel, specs)
    results: dict[str, GroupResult] = {}
    for name, labels in groups.items():
        if not labels:
            continue
        sub = panel.subset(labels)
        if len(labels) >= 2:
            order = _pick_order(sub, config)
            try:
                check_dof(sub.n_obs - order, len(labels), order)
            except DegreesOfFreedomError as exc:
                raise DegreesOfFreedomError(f"group {name!r}: {exc}") from exc
            _, graph, pr, cr, _ = _analyze(sub, config)
        else:
            graph = net.CausalNetwork(nodes=tuple(labels), edges=())
            pr = pagerank(graph, damping=config.damping)
            cr = cheirank(graph, damping=config.damping)
        results[name] = GroupResult(name, tuple(labels), graph, pr, cr)
    return results


def run_rolling(
    panel: Panel, window_spec: WindowSpec | None = None, config: Config = Config()
) -> list[WindowResult]:
    """Run the network-and-rank analysis on each rolling window."""
    window_spec = window_spec or WindowSpec(config.width_months, config.step_months)
    spans = window_spec.windows(panel.dates[0], panel.dates[-1])
    if not spans:
        raise RateNetError("panel shorter than one rolling window")
    results = []
    for start, end in spans:
        sub = panel.slice_dates(start, end)
        try:
            order = _pick_order(sub, config)
            check_dof(sub.n_obs - order, sub.n_series, order)
            _, graph, pr, cr, _ = _analyze(sub, config)
            results.append(WindowResult(start, end, graph, pr, cr))
        except (DegreesOfFreedomError, RateNetError) as exc:
            warnings.warn(f"window {start}..{end} skipped: {exc}")
            results.append(WindowResult(start, end, None, None, None, skipped=str(exc)))
    return results


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def run_full(panel: Panel, config: Config, out_dir) -> dict:
    """Preprocess, screen, test, assemble, annotate, and rank in one pass.

    Writes per-stage artifacts plus a manifest with their checksums to
    out_dir and returns the manifest.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stages: dict[str, str] = {}

    def emit(name: str, filename: str, writer) -> None:
        path = out / filename
        writer(path)
        stages[name] = filename

    try:
        if config.exclude_categories:
            keep = [
                lab
                for lab in panel.labels
                if panel.meta.get(lab, {}).get("category") not in config.exclude_categories
            ]
            panel = panel.subset(keep)
        cleaned = clean(panel, config.min_length, config.max_missing_frac)
        detrended = detrend_ma(cleaned, config.ma_window)
        emit("preprocess", "panel.csv", detrended.to_csv)
    except RateNetError as exc:
        raise RateNetError(f"[preprocess] {exc}") from exc

    try:
        report = stationarity_screen(detrended, alpha=config.alpha)
        emit("screen", "stationarity.csv", lambda p: report.to_frame().to_csv(p, index=False))
        stationary = [r.label for r in report.records if r.stationary]
        if len(stationary) < 2:
            raise RateNetError("fewer than two stationary series survive the screen")
        screened = detrended.subset(stationary)
    except RateNetError as exc:
        raise RateNetError(f"[screen] {exc}") from exc

    try:
        edges, graph, pr, cr, order = _analyze(screened, config)
        emit("causality", "edges.csv", edges.to_csv)
    except RateNetError as exc:
        raise RateNetError(f"[causality] {exc}") from exc

    try:
        emit("network", "network.json", lambda p: net.export(graph, "json", p))
    except RateNetError as exc:
        raise RateNetError(f"[network] {exc}") from exc

    try:
        grid = FrequencyGrid(config.grid_points)
        profiles = {}
        for e in graph.edges:
            other = tuple(l for l in screened.labels if l not in (e.source, e.target))
            profiles[(e.source, e.target)] = conditional_spectral_gc(
                screened, x=e.target, y=e.source, cond=other, order=order, grid=grid
            )
        graph = net.annotate_frequency(graph, profiles)
        emit("spectral", "network_annotated.json", lambda p: net.export(graph, "json", p))
    except RateNetError as exc:
        raise RateNetError(f"[spectral] {exc}") from exc

    try:
        emit("rank", "ranks.csv", lambda p: rank_table(pr, cr).to_csv(p, index=False))
    except RateNetError as exc:
        raise RateNetError(f"[rank] {exc}") from exc

    manifest = {
        "config": config.to_dict(),
        "order": order,
        "stages": {
            name: {"file": fn, "sha256": _sha256(out / fn)} for name, fn in stages.items()
        },
    }
    with open(out / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2)
    return manifest
