"""Directed causal network assembly and export.

Nodes are rate labels; a directed edge source -> target records a
significant causality test, optionally annotated with the peak frequency of
the information flow and its band.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from xml.etree import ElementTree as ET
from xml.sax.saxutils import escape

import pandas as pd

from .causality import EdgeList
from .errors import RateNetError
from .spectral import SpectralProfile, band_classify, peak_frequency

__all__ = ["Edge", "CausalNetwork", "build_network", "annotate_frequency", "degree_table", "export"]

BAND_COLORS = {"high": "blue", "medium": "orange", "low": "red", None: "gray"}

# node area scale used in DOT output when rank scores are attached
DOT_NODE_SCALE = 10.0


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    statistic: float
    pvalue: float
    peak_lambda: float | None = None
    band: str | None = None


@dataclass(frozen=True)
class CausalNetwork:
    nodes: tuple[str, ...]
    edges: tuple[Edge, ...]
    node_meta: dict[str, dict] = field(default_factory=dict)
    scores: dict[str, float] | None = None  # optional per-node rank scores

    def __post_init__(self):
        node_set = set(self.nodes)
        if len(node_set) != len(self.nodes):
            raise RateNetError("duplicate nodes")
        seen = set()
        for e in self.edges:
            if e.source == e.target:
                raise RateNetError(f"self-loop on {e.source!r}")
            if e.source not in node_set or e.target not in node_set:
                raise RateNetError(f"edge endpoint not registered: {e.source}->{e.target}")
            if (e.source, e.target) in seen:
                raise RateNetError(f"duplicate edge {e.source}->{e.target}")
            seen.add((e.source, e.target))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def has_edge(self, source: str, target: str) -> bool:
        return any(e.source == source and e.target == target for e in self.edges)

    def successors(self, node: str) -> tuple[str, ...]:
        return tuple(e.target for e in self.edges if e.source == node)

    def predecessors(self, node: str) -> tuple[str, ...]:
        return tuple(e.source for e in self.edges if e.target == node)

    def adjacency(self) -> set[tuple[str, str]]:
        return {(e.source, e.target) for e in self.edges}

    def reverse(self) -> "CausalNetwork":
        rev = tuple(replace(e, source=e.target, target=e.source) for e in self.edges)
        return replace(self, edges=rev)

    def with_scores(self, scores: dict[str, float]) -> "CausalNetwork":
        return replace(self, scores=dict(scores))


def build_network(edges: EdgeList, nodes) -> CausalNetwork:
    """Keep only the significant records of an edge list; isolated nodes stay."""
    nodes = tuple(nodes)
    node_set = set(nodes)
    kept = []
    for stat in edges.edges:
        if stat.source not in node_set or stat.target not in node_set:
            raise RateNetError(f"edge endpoint {stat.source}->{stat.target} not in node set")
        kept.append(Edge(stat.source, stat.target, stat.statistic, stat.pvalue))
    return CausalNetwork(nodes=nodes, edges=tuple(kept))


def annotate_frequency(
    network: CausalNetwork, profiles: dict[tuple[str, str], SpectralProfile]
) -> CausalNetwork:
    """Attach peak frequency and band to each edge covered by a profile."""
    for key in profiles:
        if not network.has_edge(*key):
            raise RateNetError(f"profile given for non-edge {key[0]}->{key[1]}")
    annotated = []
    for e in network.edges:
        prof = profiles.get((e.source, e.target))
        if prof is None:
            annotated.append(e)
        else:
            lam, _ = peak_frequency(prof)
            annotated.append(replace(e, peak_lambda=lam, band=band_classify(lam)))
    return replace(network, edges=tuple(annotated))


def degree_table(network: CausalNetwork) -> pd.DataFrame:
    """Per-node out/in degree, sorted by out-degree descending then label."""
    if not network.nodes:
        return pd.DataFrame(columns=["label", "out_degree", "in_degree"])
    rows = [
        {
            "label": node,
            "out_degree": len(network.successors(node)),
            "in_degree": len(network.predecessors(node)),
        }
        for node in network.nodes
    ]
    df = pd.DataFrame(rows)
    return df.sort_values(["out_degree", "label"], ascending=[False, True]).reset_index(drop=True)


def _to_dot(network: CausalNetwork) -> str:
    lines = ["digraph causal {"]
    scores = network.scores or {}
    for node in network.nodes:
        attrs = [f'label="{node}"']
        if node in scores:
            width = DOT_NODE_SCALE * scores[node]
            attrs.append(f"width={width:.4f}")
            attrs.append("fixedsize=true")
        lines.append(f'  "{node}" [{", ".join(attrs)}];')
    for e in network.edges:
        color = BAND_COLORS[e.band]
        lines.append(f'  "{e.source}" -> "{e.target}" [color={color}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _to_graphml(network: CausalNetwork) -> str:
    root = ET.Element("graphml", xmlns="http://graphml.graphdrawing.org/xmlns")
    for kid, name, dom, typ in [
        ("d0", "statistic", "edge", "double"),
        ("d1", "pvalue", "edge", "double"),
        ("d2", "band", "edge", "string"),
        ("d3", "score", "node", "double"),
    ]:
        ET.SubElement(root, "key", id=kid, attrib={"for": dom, "attr.name": name, "attr.type": typ})
    g = ET.SubElement(root, "graph", id="causal", edgedefault="directed")
    scores = network.scores or {}
    for node in network.nodes:
        el = ET.SubElement(g, "node", id=node)
        if node in scores:
            d = ET.SubElement(el, "data", key="d3")
            d.text = repr(scores[node])
    for e in network.edges:
        el = ET.SubElement(g, "edge", source=e.source, target=e.target)
        for key, val in [("d0", e.statistic), ("d1", e.pvalue), ("d2", e.band)]:
            if val is not None:
                d = ET.SubElement(el, "data", key=key)
                d.text = escape(str(val))
    return ET.tostring(root, encoding="unicode", xml_declaration=True)


def to_json(network: CausalNetwork) -> str:
    doc = {
        "nodes": [{"label": n, **network.node_meta.get(n, {})} for n in network.nodes],
        "edges": [
            {
                "source": e.source,
                "target": e.target,
                "statistic": e.statistic,
                "pvalue": e.pvalue,
                "peak_lambda": e.peak_lambda,
                "band": e.band,
            }
            for e in network.edges
        ],
        "scores": network.scores,
    }
    return json.dumps(doc, indent=2)


def from_json(source) -> CausalNetwork:
    if isinstance(source, str) and source.lstrip().startswith("{"):
        doc = json.loads(source)
    else:
        with open(source) as fh:
            doc = json.load(fh)
    nodes = tuple(n["label"] for n in doc["nodes"])
    meta = {
        n["label"]: {k: v for k, v in n.items() if k != "label"}
        for n in doc["nodes"]
        if len(n) > 1
    }
    edges = tuple(Edge(**e) for e in doc["edges"])
    return CausalNetwork(nodes=nodes, edges=edges, node_meta=meta, scores=doc.get("scores"))


def _to_csv(network: CausalNetwork) -> str:
    rows = [
        {
            "source": e.source,
            "target": e.target,
            "statistic": e.statistic,
            "pvalue": e.pvalue,
            "peak_lambda": e.peak_lambda,
            "band": e.band,
        }
        for e in network.edges
    ]
    df = pd.DataFrame(rows, columns=["source", "target", "statistic", "pvalue", "peak_lambda", "band"])
    return df.to_csv(index=False)


def export(network: CausalNetwork, fmt: str, path=None) -> str:
    """Serialize a network as dot, graphml, json, or csv; optionally write it."""
    writers = {"dot": _to_dot, "graphml": _to_graphml, "json": to_json, "csv": _to_csv}
    if fmt not in writers:
        raise ValueError(f"unknown format {fmt!r}; use one of {sorted(writers)}")
    text = writers[fmt](network)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text
