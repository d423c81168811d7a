"""PageRank and its inverse (CheiRank) over the causal network.

PageRank scores nodes that are pointed at; CheiRank runs the same power
iteration on the edge-reversed network and therefore scores nodes that
point at many others -- the benchmark-rate candidates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

from .errors import RateNetError
from .network import CausalNetwork

__all__ = ["RankScores", "pagerank", "cheirank", "top_k", "rank_table"]


@dataclass(frozen=True)
class RankScores:
    scores: dict[str, float]
    damping: float
    iterations: int
    residual: float  # final L1 change

    def __getitem__(self, label: str) -> float:
        return self.scores[label]


def pagerank(
    network: CausalNetwork,
    damping: float = 0.85,
    tol: float = 1e-9,
    max_iter: int = 10000,
) -> RankScores:
    """Power iteration of the damped random-surfer fixed point.

    Dangling nodes (no out-links) redistribute their mass uniformly over all
    nodes. Converged when the L1 change of the score vector drops below tol.
    """
    if not network.nodes:
        raise RateNetError("pagerank needs a non-empty network")
    if not 0.0 < damping < 1.0:
        raise ValueError("damping must be in (0, 1)")
    nodes = list(network.nodes)
    N = len(nodes)
    index = {lab: i for i, lab in enumerate(nodes)}
    out_links: list[list[int]] = [[] for _ in range(N)]
    for e in network.edges:
        out_links[index[e.source]].append(index[e.target])
    out_deg = np.array([len(links) for links in out_links], dtype=float)
    dangling = out_deg == 0

    pr = np.full(N, 1.0 / N)
    for iteration in range(1, max_iter + 1):
        incoming = np.zeros(N)
        for i, links in enumerate(out_links):
            if links:
                share = pr[i] / out_deg[i]
                for j in links:
                    incoming[j] += share
        incoming += pr[dangling].sum() / N
        new = (1.0 - damping) / N + damping * incoming
        residual = float(np.abs(new - pr).sum())
        pr = new
        if residual < tol:
            return RankScores(dict(zip(nodes, pr.tolist())), damping, iteration, residual)
    raise RateNetError(
        f"pagerank did not converge in {max_iter} iterations (residual {residual:.3e})"
    )


def cheirank(
    network: CausalNetwork,
    damping: float = 0.85,
    tol: float = 1e-9,
    max_iter: int = 10000,
) -> RankScores:
    """PageRank of the edge-reversed network."""
    return pagerank(network.reverse(), damping=damping, tol=tol, max_iter=max_iter)


def top_k(scores: RankScores, k: int) -> list[str]:
    """The k highest-scoring labels; ties break alphabetically."""
    if k < 1:
        raise ValueError("k must be >= 1")
    ordered = sorted(scores.scores.items(), key=lambda kv: (-kv[1], kv[0]))
    return [lab for lab, _ in ordered[:k]]


def rank_table(pr: RankScores, chei: RankScores) -> pd.DataFrame:
    """Joint score table sorted by CheiRank descending."""
    rows = [
        {"label": lab, "pagerank": pr.scores[lab], "cheirank": chei.scores[lab]}
        for lab in pr.scores
    ]
    df = pd.DataFrame(rows)
    return df.sort_values(["cheirank", "label"], ascending=[False, True]).reset_index(drop=True)
