"""Shared fixtures: small reference networks with hand-derived structure."""

from __future__ import annotations

import json

import pytest

import regioncode as rc

# Crosswise butterfly: X1 (from s1) is demanded at t2, X2 at t1, and both
# messages must cross the single a->b link.
BUTTERFLY_DOC = {
    "nodes": ["s1", "s2", "a", "b", "t1", "t2"],
    "links": [
        {"tail": "s1", "head": "a"},
        {"tail": "s1", "head": "t1"},
        {"tail": "s2", "head": "a"},
        {"tail": "s2", "head": "t2"},
        {"tail": "a", "head": "b"},
        {"tail": "b", "head": "t1"},
        {"tail": "b", "head": "t2"},
    ],
    "source1": "s1",
    "source2": "s2",
    "sinks1": ["t2"],
    "sinks2": ["t1"],
}

# Both demands squeeze through the single v->w link: unsolvable.
BOTTLENECK_DOC = {
    "nodes": ["s1", "s2", "v", "w", "t1", "t2"],
    "links": [
        {"tail": "s1", "head": "v"},
        {"tail": "s2", "head": "v"},
        {"tail": "v", "head": "w"},
        {"tail": "w", "head": "t1"},
        {"tail": "w", "head": "t2"},
    ],
    "source1": "s1",
    "source2": "s2",
    "sinks1": ["t1"],
    "sinks2": ["t2"],
}

# Two independent unit paths; routing suffices, nothing ever encodes.
TWO_CHAINS_DOC = {
    "nodes": ["s1", "s2", "t", "u"],
    "links": [
        {"tail": "s1", "head": "t"},
        {"tail": "s2", "head": "u"},
    ],
    "source1": "s1",
    "source2": "s2",
    "sinks1": ["t"],
    "sinks2": ["u"],
}

# Both sources meet at v but each demand leaves on its own link, so v can
# route per out-link and nothing needs to encode.
MERGE_DOC = {
    "nodes": ["s1", "s2", "v", "t1", "t2"],
    "links": [
        {"tail": "s1", "head": "v"},
        {"tail": "s2", "head": "v"},
        {"tail": "v", "head": "t1"},
        {"tail": "v", "head": "t2"},
    ],
    "source1": "s1",
    "source2": "s2",
    "sinks1": ["t1"],
    "sinks2": ["t2"],
}

# Two parallel mixing nodes u, v both feed both sinks; the derived graph
# starts with four coding regions but one suffices.
PARALLEL_DOC = {
    "nodes": ["s1", "s2", "u", "v", "t1", "t2"],
    "links": [
        {"tail": "s1", "head": "u"},
        {"tail": "s2", "head": "u"},
        {"tail": "s1", "head": "v"},
        {"tail": "s2", "head": "v"},
        {"tail": "u", "head": "t1"},
        {"tail": "v", "head": "t1"},
        {"tail": "u", "head": "t2"},
        {"tail": "v", "head": "t2"},
    ],
    "source1": "s1",
    "source2": "s2",
    "sinks1": ["t2"],
    "sinks2": ["t1"],
}


def load(doc: dict) -> rc.Network:
    return rc.load_network(json.dumps(doc))


def solve_pipeline(network: rc.Network):
    """basic decomposition -> region graph -> labels, as a tuple."""
    decomposition = rc.basic_decomposition(network)
    graph = rc.region_graph(decomposition)
    labeled = rc.classify(graph, decomposition)
    return decomposition, graph, labeled


def heads_of(labeled: rc.LabeledRegionGraph, indices) -> list[int]:
    return sorted(labeled.graph.heads[i] for i in indices)


def message_dependence_ok(network: rc.Network,
                          labeled: rc.LabeledRegionGraph,
                          solution: rc.NetworkSolution) -> bool:
    """Every link of a session-labeled region must carry a value that is
    constant in the other session's message, across all message pairs."""
    field = solution.field
    tables: dict[int, dict[tuple[int, int], int]] = {}
    for x1 in field.elements():
        for x2 in field.elements():
            values = rc.simulate_link_values(network, solution, x1, x2)
            for link_id, value in values.items():
                tables.setdefault(link_id, {})[(x1, x2)] = value
    for session, members in ((1, labeled.x1), (2, labeled.x2)):
        for i in members:
            if labeled.kind[i] == rc.RegionKind.SINGULAR:
                continue
            for link_id in labeled.decomposition.regions[i].links:
                table = tables[link_id]
                for own in field.elements():
                    pair0 = (own, 0) if session == 1 else (0, own)
                    want = table[pair0]
                    for other in field.elements():
                        pair = (own, other) if session == 1 else (other, own)
                        if table[pair] != want:
                            return False
    return True


@pytest.fixture
def butterfly() -> rc.Network:
    return load(BUTTERFLY_DOC)


@pytest.fixture
def bottleneck() -> rc.Network:
    return load(BOTTLENECK_DOC)


@pytest.fixture
def two_chains() -> rc.Network:
    return load(TWO_CHAINS_DOC)
