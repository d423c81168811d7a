"""Command-line front end: one subcommand per pipeline stage with CSV/JSON
hand-offs between them.

Exit codes: 0 success, 1 analysis error (one machine-parsable line on
stderr: ``error code=1 stage=<stage> msg=<message>``), 2 usage error.
The RATENET_OUT environment variable overrides default output directories.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import network as net
from .causality import CORRECTIONS, all_pairs_conditional, conditional_gc
from .errors import RateNetError
from .panel import clean, detrend_ma, load_csv, load_meta, stationarity_screen
from .pipeline import (
    Config,
    WindowSpec,
    run_full,
    run_group_analysis,
    run_rolling,
)
from .rank import cheirank, pagerank, rank_table
from .spectral import FrequencyGrid, band_classify, conditional_spectral_gc
from .synth import make_chain, make_hub_panel, truth_to_json
from .var import simulate_var

TRADING_DAYS_PER_YEAR = 252


def _out_dir(args, default="ratenet_out"):
    return getattr(args, "outdir", None) or os.environ.get("RATENET_OUT") or default


def _load_panel(args):
    meta = load_meta(args.meta) if getattr(args, "meta", None) else None
    return load_csv(args.input, date_column=args.date_column, meta=meta)


def _config(args) -> Config:
    kwargs = {}
    for attr, key in [
        ("window", "ma_window"),
        ("alpha", "alpha"),
        ("order", "order"),
        ("max_order", "max_order"),
        ("correction", "correction"),
        ("damping", "damping"),
        ("tol", "rank_tol"),
        ("grid_points", "grid_points"),
        ("band_low", "band_low"),
        ("band_high", "band_high"),
        ("width", "width_months"),
        ("step", "step_months"),
        ("seed", "seed"),
    ]:
        if getattr(args, attr, None) is not None:
            kwargs[key] = getattr(args, attr)
    if getattr(args, "min_years", None) is not None:
        kwargs["min_length"] = int(args.min_years * TRADING_DAYS_PER_YEAR)
    if getattr(args, "exclude_categories", None):
        kwargs["exclude_categories"] = tuple(args.exclude_categories.split(","))
    return Config(**kwargs)


def cmd_preprocess(args) -> int:
    panel = _load_panel(args)
    cfg = _config(args)
    cleaned = clean(panel, cfg.min_length, cfg.max_missing_frac)
    detrended = detrend_ma(cleaned, cfg.ma_window)
    detrended.to_csv(args.output)
    if args.report:
        report = stationarity_screen(detrended, alpha=cfg.alpha)
        report.to_frame().to_csv(args.report, index=False)
        dropped = report.nonstationary_labels
        if dropped:
            print(f"non-stationary series: {','.join(dropped)}")
    print(f"wrote {args.output}: {detrended.n_series} series x {detrended.n_obs} rows")
    return 0


def cmd_test(args) -> int:
    panel = _load_panel(args)
    if args.cond_all:
        cond = tuple(l for l in panel.labels if l not in (args.x, args.y))
    else:
        cond = tuple(c for c in (args.cond or "").split(",") if c)
    stat = conditional_gc(panel, x=args.x, y=args.y, cond=cond, order=args.order or 1)
    print(
        json.dumps(
            {
                "source": stat.source,
                "target": stat.target,
                "conditioning": list(stat.conditioning),
                "statistic": stat.statistic,
                "pvalue": stat.pvalue,
                "order": stat.order,
                "nobs": stat.nobs,
            },
            indent=2,
        )
    )
    return 0


def cmd_analyze(args) -> int:
    panel = _load_panel(args)
    cfg = _config(args)
    from .pipeline import _pick_order

    order = _pick_order(panel, cfg)
    edges = all_pairs_conditional(
        panel, order=order, alpha=cfg.alpha, correction=cfg.correction
    )
    edges.to_csv(args.output)
    if args.network:
        graph = net.build_network(edges, panel.labels)
        net.export(graph, "json", args.network)
    print(f"order={order} tested={len(edges.stats)} significant={len(edges.edges)}")
    return 0


def cmd_spectral(args) -> int:
    panel = _load_panel(args)
    if args.cond_all:
        cond = tuple(l for l in panel.labels if l not in (args.x, args.y))
    else:
        cond = tuple(c for c in (args.cond or "").split(",") if c)
    grid = FrequencyGrid(args.grid_points or 512)
    profile = conditional_spectral_gc(
        panel, x=args.x, y=args.y, cond=cond, order=args.order or 1, grid=grid
    )
    profile.to_csv(args.output)
    summary = profile.summary()
    summary["band"] = band_classify(
        summary["peak_lambda"],
        low=args.band_low or np.pi / 3,
        high=args.band_high or 2 * np.pi / 3,
    )
    if args.summary:
        with open(args.summary, "w") as fh:
            json.dump(summary, fh, indent=2)
    print(json.dumps(summary))
    return 0


def cmd_rank(args) -> int:
    graph = net.from_json(args.network)
    pr = pagerank(graph, damping=args.damping, tol=args.tol)
    cr = cheirank(graph, damping=args.damping, tol=args.tol)
    table = rank_table(pr, cr)
    if args.output:
        table.to_csv(args.output, index=False)
    print(table.to_string(index=False))
    return 0


def cmd_groups(args) -> int:
    panel = _load_panel(args)
    cfg = _config(args)
    out = _out_dir(args)
    os.makedirs(out, exist_ok=True)
    results = run_group_analysis(panel, config=cfg)
    for name, res in results.items():
        net.export(res.network, "json", os.path.join(out, f"group_{name}_network.json"))
        rank_table(res.pagerank, res.cheirank).to_csv(
            os.path.join(out, f"group_{name}_ranks.csv"), index=False
        )
        print(f"group {name}: {len(res.labels)} series, top CheiRank {res.top}")
    return 0


def cmd_evolve(args) -> int:
    panel = _load_panel(args)
    cfg = _config(args)
    out = _out_dir(args)
    os.makedirs(out, exist_ok=True)
    spec = WindowSpec(cfg.width_months, cfg.step_months)
    for i, res in enumerate(run_rolling(panel, spec, cfg), start=1):
        tag = f"window{i}_{res.start}_{res.end}"
        if res.skipped:
            print(f"{tag}: skipped ({res.skipped})")
            continue
        net.export(res.network, "json", os.path.join(out, f"{tag}_network.json"))
        rank_table(res.pagerank, res.cheirank).to_csv(
            os.path.join(out, f"{tag}_ranks.csv"), index=False
        )
        print(f"{tag}: top CheiRank {res.top}")
    return 0


def cmd_analyze_full(args) -> int:
    panel = _load_panel(args)
    cfg = _config(args)
    manifest = run_full(panel, cfg, _out_dir(args))
    print(json.dumps(manifest["stages"], indent=2))
    return 0


def cmd_synth(args) -> int:
    if args.kind == "chain":
        model, truth = make_chain(n=args.n, coupling=args.coupling, seed=args.seed)
        panel = simulate_var(model, T=args.T, seed=args.seed)
    else:
        panel, truth = make_hub_panel(T=args.T, seed=args.seed, coupling=args.coupling)
        from .synth import default_hub_groups, make_hub_model

        model, _ = make_hub_model(*default_hub_groups(), coupling=args.coupling)
    panel.to_csv(args.output)
    if args.truth:
        truth_to_json(truth, model, args.truth)
    print(f"wrote {args.output}: {panel.n_series} series x {panel.n_obs} rows")
    return 0


def cmd_export(args) -> int:
    graph = net.from_json(args.network)
    text = net.export(graph, args.format, args.output)
    if not args.output:
        print(text)
    return 0


def _add_panel_args(p):
    p.add_argument("--input", required=True, help="panel CSV")
    p.add_argument("--date-column", default="date")
    p.add_argument("--meta", help="sidecar JSON metadata (label -> {category, term})")


def _add_model_args(p):
    p.add_argument("--order", type=int, help="VAR order (default: select by BIC)")
    p.add_argument("--max-order", type=int, default=None, dest="max_order")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--correction", choices=CORRECTIONS, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ratenet",
        description="Causal networks of interest-rate panels: conditional Granger "
        "causality in time and frequency domains with CheiRank benchmark scoring.",
    )
    parser.add_argument(
        "--jobs",
        type=int,
        default=None,
        help="parallelism degree (results are independent of this setting)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="clean, detrend, and screen a panel")
    _add_panel_args(p)
    p.add_argument("--output", required=True)
    p.add_argument("--window", type=int, default=None, help="moving-average window (default 100)")
    p.add_argument("--min-years", type=float, default=None, dest="min_years")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--report", help="write the stationarity report CSV here")
    p.set_defaults(func=cmd_preprocess, stage="preprocess")

    p = sub.add_parser("test", help="single causality test (y -> x)")
    _add_panel_args(p)
    p.add_argument("--x", required=True, help="target series")
    p.add_argument("--y", required=True, help="source series")
    p.add_argument("--cond", help="comma-separated conditioning labels")
    p.add_argument("--cond-all", action="store_true", dest="cond_all")
    p.add_argument("--order", type=int, default=None)
    p.set_defaults(func=cmd_test, stage="test")

    p = sub.add_parser("analyze", help="all-pairs conditional causality network")
    _add_panel_args(p)
    _add_model_args(p)
    p.add_argument("--output", required=True, help="edge table CSV")
    p.add_argument("--network", help="also write the network JSON here")
    p.set_defaults(func=cmd_analyze, stage="analyze")

    p = sub.add_parser("full", help="full pipeline into an output directory")
    _add_panel_args(p)
    _add_model_args(p)
    p.add_argument("--outdir")
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--min-years", type=float, default=None, dest="min_years")
    p.add_argument("--grid-points", type=int, default=None, dest="grid_points")
    p.add_argument("--exclude-categories", dest="exclude_categories")
    p.set_defaults(func=cmd_analyze_full, stage="full")

    p = sub.add_parser("spectral", help="spectral causality profile for one pair")
    _add_panel_args(p)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--cond")
    p.add_argument("--cond-all", action="store_true", dest="cond_all")
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--grid-points", type=int, default=None, dest="grid_points")
    p.add_argument("--band-low", type=float, default=None, dest="band_low")
    p.add_argument("--band-high", type=float, default=None, dest="band_high")
    p.add_argument("--output", required=True, help="profile CSV (lambda, value)")
    p.add_argument("--summary", help="write the JSON summary here")
    p.set_defaults(func=cmd_spectral, stage="spectral")

    p = sub.add_parser("rank", help="PageRank/CheiRank scores of a network")
    p.add_argument("--network", required=True, help="network JSON")
    p.add_argument("--damping", type=float, default=0.85)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--output", help="scores CSV")
    p.set_defaults(func=cmd_rank, stage="rank")

    p = sub.add_parser("groups", help="per-maturity-group networks and ranks")
    _add_panel_args(p)
    _add_model_args(p)
    p.add_argument("--outdir")
    p.set_defaults(func=cmd_groups, stage="groups")

    p = sub.add_parser("evolve", help="rolling-window evolution of benchmarks")
    _add_panel_args(p)
    _add_model_args(p)
    p.add_argument("--width", type=int, default=None, help="window width in months (36)")
    p.add_argument("--step", type=int, default=None, help="window step in months (24)")
    p.add_argument("--outdir")
    p.set_defaults(func=cmd_evolve, stage="evolve")

    p = sub.add_parser("synth", help="generate a synthetic panel with known structure")
    p.add_argument("--kind", choices=["chain", "hub"], default="chain")
    p.add_argument("--n", type=int, default=3, help="chain length")
    p.add_argument("--coupling", type=float, default=0.4)
    p.add_argument("--T", type=int, default=5000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True, help="panel CSV")
    p.add_argument("--truth", help="write adjacency + model JSON here")
    p.set_defaults(func=cmd_synth, stage="synth")

    p = sub.add_parser("export", help="convert a network JSON to dot/graphml/csv")
    p.add_argument("--network", required=True)
    p.add_argument("--format", choices=["dot", "graphml", "json", "csv"], required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_export, stage="export")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RateNetError as exc:
        print(f"error code=1 stage={args.stage} msg={exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, KeyError) as exc:
        print(f"error code=1 stage={args.stage} msg={exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
