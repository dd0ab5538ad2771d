"""Deterministic DOT emitters for networks, link graphs, and region graphs."""

from __future__ import annotations

from .labeling import LabeledRegionGraph, RegionKind
from .model import Network
from .regions import RegionDecomposition, RegionGraph

_KIND_COLORS = {
    RegionKind.X1: "lightblue",
    RegionKind.X2: "lightgreen",
    RegionKind.CODING: "orange",
    RegionKind.SINGULAR: "red",
}


def _link_label(network: Network, link_id: int) -> str:
    ln = network.link(link_id)
    if ln.is_source_link:
        return f"{link_id}: X{network.session_of_source_link[link_id]} source"
    if ln.is_sink_link:
        session = network.session_of_sink_link[link_id]
        return f"{link_id}: X{session} sink @{ln.tail}"
    return f"{link_id}: {ln.tail}->{ln.head}"


def line_graph_dot(network: Network, graph: RegionGraph) -> str:
    """DOT form of the line graph (one vertex per link)."""
    lines = ["digraph line_graph {"]
    for i, head in enumerate(graph.heads):
        lines.append(f'  e{head} [label="{_link_label(network, head)}"];')
    for p, c in sorted(graph.edges):
        lines.append(f"  e{graph.heads[p]} -> e{graph.heads[c]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _region_label(decomposition: RegionDecomposition, index: int) -> str:
    region = decomposition.regions[index]
    parts = [f"{l}*" if l == region.head else str(l)
             for l in sorted(region.links)]
    return ", ".join(parts)


def region_graph_dot(decomposition: RegionDecomposition,
                     graph: RegionGraph) -> str:
    """DOT form of a region graph: node label lists the region's links
    with the head starred."""
    lines = ["digraph region_graph {"]
    for i, head in enumerate(graph.heads):
        label = _region_label(decomposition, i)
        lines.append(f'  R{head} [label="{label}"];')
    for p, c in sorted(graph.edges):
        lines.append(f"  R{graph.heads[p]} -> R{graph.heads[c]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def labeled_graph_dot(labeled: LabeledRegionGraph) -> str:
    """DOT form of a labeled region graph with kinds rendered as colors."""
    graph = labeled.graph
    lines = ["digraph labeled_region_graph {"]
    for i, head in enumerate(graph.heads):
        kind = labeled.kind[i]
        label = f"{_region_label(labeled.decomposition, i)}\\n{kind.value}"
        lines.append(
            f'  R{head} [label="{label}", style=filled, '
            f'fillcolor={_KIND_COLORS[kind]}];')
    for p, c in sorted(graph.edges):
        lines.append(f"  R{graph.heads[p]} -> R{graph.heads[c]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
