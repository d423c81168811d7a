"""Synthetic panels with planted causal structure, and a brute-force
causality oracle.

Everything here exists to provide ground truth: chains for the
spurious-causality demonstration, hub panels for benchmark detection, and a
long-sample regression oracle coded independently of the main causality
path so the two implementations can cross-check each other.
"""

from __future__ import annotations

import json
import re

import numpy as np

from .errors import UnstableModelError
from .panel import Panel
from .var import VarModel, is_stable, simulate_var

__all__ = [
    "make_chain",
    "make_hub_panel",
    "default_hub_groups",
    "oracle_gc",
    "parse_label_meta",
    "truth_to_json",
]

DEFAULT_COUPLING = 0.4
DEFAULT_DIAG = 0.5

_LABEL_RE = re.compile(r"^([A-Za-z]+)(\d+[dmy])$")


def parse_label_meta(label: str) -> dict:
    """Split a rate label such as 'CBB2y' into {'category': 'CBB', 'term': '2y'}."""
    m = _LABEL_RE.match(label)
    if not m:
        return {}
    return {"category": m.group(1), "term": m.group(2)}


def _check_stable(model: VarModel) -> VarModel:
    if not is_stable(model):
        raise UnstableModelError("planted structure is unstable; reduce the coupling")
    return model


def make_chain(
    n: int = 3,
    coupling: float = DEFAULT_COUPLING,
    seed: int = 0,
    diag: float = DEFAULT_DIAG,
) -> tuple[VarModel, set[tuple[str, str]]]:
    """VAR(1) chain X1 -> X2 -> ... -> Xn with unit innovation covariance.

    Returns the model and its ground-truth adjacency. The seed only matters
    when the model is later simulated.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    labels = tuple(f"X{i + 1}" for i in range(n))
    A = np.eye(n) * diag
    for i in range(n - 1):
        A[i + 1, i] = coupling
    model = VarModel(
        order=1, coeffs=A[None, :, :], sigma=np.eye(n), labels=labels, nobs=0
    )
    truth = (
        {(labels[i], labels[i + 1]) for i in range(n - 1)} if coupling != 0.0 else set()
    )
    return _check_stable(model), truth


def default_hub_groups() -> tuple[dict[str, list[str]], dict[str, str]]:
    """Three maturity groups of five realistic rate labels each, with the
    planted hub of each group listed first."""
    groups = {
        "short": ["R1d", "IBO7d", "SHIBOR3m", "CBB6m", "TB1y"],
        "mid": ["CBB2y", "TB3y", "PFB2y", "HRCB5y", "SeCBFB3y"],
        "long": ["TB7y", "PFB10y", "RD7y", "ABS8y", "LRCB10y"],
    }
    hubs = {name: labs[0] for name, labs in groups.items()}
    return groups, hubs


def make_hub_model(
    groups: dict[str, list[str]],
    hubs: dict[str, str],
    coupling: float = DEFAULT_COUPLING,
    diag: float = DEFAULT_DIAG,
) -> tuple[VarModel, set[tuple[str, str]]]:
    """Block-diagonal VAR(1): within each group the hub drives every member;
    groups are mutually independent (the market-segmentation analogue)."""
    labels: list[str] = []
    for name, labs in groups.items():
        if hubs[name] not in labs:
            raise ValueError(f"hub {hubs[name]!r} not in group {name!r}")
        labels.extend(labs)
    if len(set(labels)) != len(labels):
        raise ValueError("duplicate labels across groups")
    n = len(labels)
    index = {lab: i for i, lab in enumerate(labels)}
    A = np.eye(n) * diag
    truth = set()
    for name, labs in groups.items():
        hub = hubs[name]
        for lab in labs:
            if lab != hub:
                A[index[lab], index[hub]] = coupling
                truth.add((hub, lab))
    model = VarModel(
        order=1, coeffs=A[None, :, :], sigma=np.eye(n), labels=tuple(labels), nobs=0
    )
    return _check_stable(model), truth


def make_hub_panel(
    groups: dict[str, list[str]] | None = None,
    hubs: dict[str, str] | None = None,
    T: int = 5000,
    seed: int = 0,
    coupling: float = DEFAULT_COUPLING,
) -> tuple[Panel, set[tuple[str, str]]]:
    """Simulated panel from the hub model, with category/term metadata
    parsed from the labels."""
    if groups is None or hubs is None:
        d_groups, d_hubs = default_hub_groups()
        groups = groups or d_groups
        hubs = hubs or d_hubs
    model, truth = make_hub_model(groups, hubs, coupling=coupling)
    panel = simulate_var(model, T=T, seed=seed)
    meta = {lab: parse_label_meta(lab) for lab in panel.labels}
    return Panel(panel.labels, panel.dates, panel.values, meta), truth


def _oracle_regress(values: np.ndarray, target: int, lag_cols: list[int], order: int) -> float:
    """Residual variance of the target regressed on the given columns' lags,
    via normal equations. Deliberately separate from the main least-squares
    path."""
    T = values.shape[0]
    y = values[order:, target]
    X = np.column_stack(
        [values[order - k : T - k, j] for k in range(1, order + 1) for j in lag_cols]
    )
    XtX = X.T @ X
    Xty = X.T @ y
    beta = np.linalg.solve(XtX, Xty)
    resid = y - X @ beta
    return float(resid @ resid / len(y))


def oracle_gc(
    model: VarModel,
    x: str,
    y: str,
    cond=(),
    order: int | None = None,
    T: int = 1_000_000,
    seed: int = 12345,
) -> float:
    """Reference causality statistic by brute force: simulate a long sample
    and form the log variance ratio with an independent regression routine."""
    panel = simulate_var(model, T=T, seed=seed)
    cond = tuple(cond)
    order = order or model.order
    cols = [panel.index(lab) for lab in (x, y) + cond]
    values = panel.values - panel.values.mean(axis=0)
    full = _oracle_regress(values, target=cols[0], lag_cols=cols, order=order)
    reduced = _oracle_regress(
        values, target=cols[0], lag_cols=[cols[0]] + list(cols[2:]), order=order
    )
    return float(np.log(reduced / full))


def truth_to_json(truth: set[tuple[str, str]], model: VarModel, path=None) -> str:
    """Serialize a planted structure (adjacency plus generating model)."""
    doc = {
        "edges": sorted([list(e) for e in truth]),
        "model": json.loads(model.to_json()),
    }
    text = json.dumps(doc, indent=2)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text
