"""Session labeling, region classification, and the feasibility decision.

The X1/X2 label sets are least fixed points: a region is labeled with a
session if it contains one of that session's links, or once all of its
parents are labeled.  A region with both labels (singular) certifies
infeasibility; a region with neither is a coding region.

Feasibility of a graph whose non-source vertices all have two or more
parents is exactly the absence of singular regions.  Graphs that violate
that precondition (they arise mid-minimization after edge deletions) are
first normalized by repeatedly folding every one-parent vertex into its
unique parent; a non-source vertex left with no parents at all makes the
graph infeasible.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import InfeasibleInputError
from .model import Network
from .regions import RegionDecomposition, RegionGraph, basic_decomposition, region_graph


class RegionKind(enum.Enum):
    X1 = "x1"
    X2 = "x2"
    CODING = "coding"
    SINGULAR = "singular"


@dataclass(frozen=True)
class RegionRoles:
    x1_source: bool = False
    x2_source: bool = False
    x1_sink: bool = False
    x2_sink: bool = False

    @property
    def is_source(self) -> bool:
        return self.x1_source or self.x2_source

    @property
    def has_x1_link(self) -> bool:
        return self.x1_source or self.x1_sink

    @property
    def has_x2_link(self) -> bool:
        return self.x2_source or self.x2_sink

    def merged(self, other: "RegionRoles") -> "RegionRoles":
        return RegionRoles(
            self.x1_source or other.x1_source,
            self.x2_source or other.x2_source,
            self.x1_sink or other.x1_sink,
            self.x2_sink or other.x2_sink,
        )


def roles_of_links(network: Network, links) -> RegionRoles:
    x1_source = 1 in links
    x2_source = 2 in links
    x1_sink = x2_sink = False
    for link_id in links:
        s = network.session_of_sink_link.get(link_id)
        if s == 1:
            x1_sink = True
        elif s == 2:
            x2_sink = True
    return RegionRoles(x1_source, x2_source, x1_sink, x2_sink)


@dataclass(frozen=True, eq=False)
class LabeledRegionGraph:
    graph: RegionGraph
    decomposition: RegionDecomposition
    x1: frozenset[int]
    x2: frozenset[int]
    kind: dict[int, RegionKind]
    roles: dict[int, RegionRoles]

    def regions_of_kind(self, kind: RegionKind) -> tuple[int, ...]:
        return tuple(i for i in range(self.graph.n) if self.kind[i] == kind)

    @property
    def coding_regions(self) -> tuple[int, ...]:
        return self.regions_of_kind(RegionKind.CODING)

    @property
    def singular_regions(self) -> tuple[int, ...]:
        return self.regions_of_kind(RegionKind.SINGULAR)

    def counts(self) -> dict[str, int]:
        out = {k.value: 0 for k in RegionKind}
        for i in range(self.graph.n):
            out[self.kind[i].value] += 1
        return out


def _fixed_point(order, parents, seeded) -> set:
    labeled = set(seeded)
    for v in order:
        if v in labeled:
            continue
        ps = parents[v]
        if ps and all(p in labeled for p in ps):
            labeled.add(v)
    return labeled


def label(graph: RegionGraph, decomposition: RegionDecomposition,
          session: int) -> frozenset[int]:
    """Least fixed point of one session's labeling over the region graph."""
    if session not in (1, 2):
        raise ValueError("session must be 1 or 2")
    network = decomposition.network
    seeded = set()
    for i, region in enumerate(decomposition.regions):
        roles = roles_of_links(network, region.links)
        if (roles.has_x1_link, roles.has_x2_link)[session - 1]:
            seeded.add(i)
    order = range(graph.n)
    return frozenset(_fixed_point(order, graph.parents, seeded))


def classify(graph: RegionGraph,
             decomposition: RegionDecomposition) -> LabeledRegionGraph:
    """Label both sessions and tag every region X1/X2/CODING/SINGULAR."""
    x1 = label(graph, decomposition, 1)
    x2 = label(graph, decomposition, 2)
    kind = {}
    roles = {}
    for i, region in enumerate(decomposition.regions):
        if i in x1 and i in x2:
            kind[i] = RegionKind.SINGULAR
        elif i in x1:
            kind[i] = RegionKind.X1
        elif i in x2:
            kind[i] = RegionKind.X2
        else:
            kind[i] = RegionKind.CODING
        roles[i] = roles_of_links(decomposition.network, region.links)
    return LabeledRegionGraph(graph=graph, decomposition=decomposition,
                              x1=x1, x2=x2, kind=kind, roles=roles)


class WorkGraph:
    """Mutable labeled graph keyed by region head id.

    Backs feasibility normalization and the minimization edit search.
    Combining a parent P with a child Q merges Q's links and roles into P;
    the merged vertex keeps P's in-edges and the union of out-edges, and
    Q's other in-edges vanish (the merged head is P's head, so only links
    feeding P's head still define parenthood).
    """

    def __init__(self, links: dict[int, frozenset[int]],
                 roles: dict[int, RegionRoles],
                 parents: dict[int, set[int]]):
        self.links = links
        self.roles = roles
        self.parents = parents

    @classmethod
    def from_labeled(cls, labeled: LabeledRegionGraph) -> "WorkGraph":
        graph, decomposition = labeled.graph, labeled.decomposition
        heads = graph.heads
        links = {heads[i]: decomposition.regions[i].links
                 for i in range(graph.n)}
        roles = {heads[i]: labeled.roles[i] for i in range(graph.n)}
        parents = {heads[i]: {heads[p] for p in graph.parents[i]}
                   for i in range(graph.n)}
        return cls(links, roles, parents)

    def copy(self) -> "WorkGraph":
        return WorkGraph(dict(self.links), dict(self.roles),
                         {h: set(ps) for h, ps in self.parents.items()})

    def sorted_heads(self) -> list[int]:
        return sorted(self.links)

    def non_source_heads(self) -> list[int]:
        return [h for h in self.sorted_heads() if not self.roles[h].is_source]

    def children_of(self, head: int) -> list[int]:
        return [c for c in self.sorted_heads() if head in self.parents[c]]

    def delete_edge(self, parent: int, child: int) -> None:
        self.parents[child].remove(parent)

    def combine(self, parent: int, child: int) -> None:
        if parent not in self.parents[child]:
            raise AssertionError(f"{parent} is not a parent of {child}")
        self.links[parent] = self.links[parent] | self.links[child]
        self.roles[parent] = self.roles[parent].merged(self.roles[child])
        for other, ps in self.parents.items():
            if child in ps:
                ps.discard(child)
                if other != parent:
                    ps.add(parent)
        del self.links[child]
        del self.roles[child]
        del self.parents[child]

    def labels(self) -> tuple[set[int], set[int]]:
        order = self.sorted_heads()
        seeds1 = {h for h in order if self.roles[h].has_x1_link}
        seeds2 = {h for h in order if self.roles[h].has_x2_link}
        x1 = _fixed_point(order, self.parents, seeds1)
        x2 = _fixed_point(order, self.parents, seeds2)
        return x1, x2

    def has_singular(self) -> bool:
        x1, x2 = self.labels()
        return bool(x1 & x2)

    def normalized_feasible(self) -> bool:
        """Feasibility after folding unique-parent vertices away.

        Every fold is feasibility-preserving in both directions, so the
        verdict transfers to the input graph.  A non-source vertex with an
        empty parent set cannot compute anything: infeasible.
        """
        g = self.copy()
        changed = True
        while changed:
            changed = False
            for q in g.non_source_heads():
                ps = g.parents[q]
                if len(ps) == 0:
                    return False
                if len(ps) == 1:
                    g.combine(next(iter(ps)), q)
                    changed = True
                    break
        return not g.has_singular()


def feasibility(labeled: LabeledRegionGraph) -> bool:
    """True iff the labeled graph admits a code.

    When every non-source region already has two or more parents this is
    exactly the absence of singular regions; otherwise the graph is
    normalized first.
    """
    graph = labeled.graph
    needs_normalization = any(
        not labeled.roles[i].is_source and len(graph.parents[i]) < 2
        for i in range(graph.n))
    if not needs_normalization:
        return not labeled.singular_regions
    return WorkGraph.from_labeled(labeled).normalized_feasible()


def classify_network(network: Network) -> LabeledRegionGraph:
    decomposition = basic_decomposition(network)
    return classify(region_graph(decomposition), decomposition)


def solvable(network: Network) -> tuple[bool, LabeledRegionGraph]:
    """Decide solvability; the returned labeled graph is the evidence."""
    labeled = classify_network(network)
    return feasibility(labeled), labeled


def require_feasible(labeled: LabeledRegionGraph) -> None:
    if not feasibility(labeled):
        singular = [labeled.graph.heads[i] for i in labeled.singular_regions]
        detail = f"singular regions headed by {singular}" if singular \
            else "infeasible after unique-parent normalization"
        raise InfeasibleInputError(f"region graph admits no code: {detail}")
