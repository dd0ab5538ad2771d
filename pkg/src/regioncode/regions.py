"""Region algebra: decompositions, contraction, region graphs, line graph.

A region is a set of links with a designated head such that every other
member has an incoming link inside the set; a decomposition partitions all
links (real and imaginary) into regions.  The region graph links region P
to region Q whenever Q's head has an incoming link inside P.  The head of a
region is always its smallest link id, so region-graph edges ascend in head
order and the graph is acyclic by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _accel
from .errors import NotAdjacentError, NotAPartitionError
from .model import Network


@dataclass(frozen=True)
class Region:
    head: int
    links: frozenset[int]


@dataclass(frozen=True, eq=False)
class RegionDecomposition:
    """A partition of the link set into regions, sorted by head id."""

    network: Network
    regions: tuple[Region, ...]

    @property
    def owner(self) -> dict[int, int]:
        """Map link id -> index of its region."""
        if "_owner" not in self.__dict__:
            owner = {}
            for idx, region in enumerate(self.regions):
                for link_id in region.links:
                    owner[link_id] = idx
            self.__dict__["_owner"] = owner
        return self.__dict__["_owner"]

    @property
    def heads(self) -> tuple[int, ...]:
        return tuple(r.head for r in self.regions)

    def index_of_head(self, head: int) -> int:
        for idx, region in enumerate(self.regions):
            if region.head == head:
                return idx
        raise KeyError(f"no region headed by link {head}")

    def region_of(self, link_id: int) -> Region:
        return self.regions[self.owner[link_id]]

    def same_partition(self, other: "RegionDecomposition") -> bool:
        return self.regions == other.regions

    def dump(self) -> str:
        """Canonical text form: one line per region, 'head: sorted links'."""
        lines = []
        for region in self.regions:
            body = " ".join(str(l) for l in sorted(region.links))
            lines.append(f"{region.head}: {body}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True, eq=False)
class RegionGraph:
    """DAG over region indices.  Vertex i is decomposition region i; the
    vertex order (ascending head) is topological.  Graphs produced by
    minimization may carry a subset of the recomputable edge set."""

    heads: tuple[int, ...]
    edges: frozenset[tuple[int, int]]
    parents: tuple[tuple[int, ...], ...]
    children: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.heads)


def _graph_from_parent_sets(heads: Sequence[int],
                            parent_sets: Sequence[set[int]]) -> RegionGraph:
    n = len(heads)
    edges = set()
    parents = []
    children: list[list[int]] = [[] for _ in range(n)]
    for j in range(n):
        ps = sorted(parent_sets[j])
        parents.append(tuple(ps))
        for p in ps:
            if p == j:
                raise AssertionError("region graph self-loop")
            edges.add((p, j))
            children[p].append(j)
    return RegionGraph(
        heads=tuple(heads),
        edges=frozenset(edges),
        parents=tuple(parents),
        children=tuple(tuple(sorted(c)) for c in children),
    )


def region_graph(decomposition: RegionDecomposition) -> RegionGraph:
    """The region graph of a decomposition, recomputed from in-sets."""
    network = decomposition.network
    owner = decomposition.owner
    parent_sets: list[set[int]] = []
    for j, region in enumerate(decomposition.regions):
        ps = {owner[u] for u in network.in_set(region.head)}
        ps.discard(j)
        parent_sets.append(ps)
    return _graph_from_parent_sets(decomposition.heads, parent_sets)


def _decomposition_from_owner(network: Network,
                              owner_of_link: dict[int, int]) -> RegionDecomposition:
    groups: dict[int, list[int]] = {}
    for link_id, head in owner_of_link.items():
        groups.setdefault(head, []).append(link_id)
    regions = tuple(Region(head, frozenset(groups[head]))
                    for head in sorted(groups))
    return RegionDecomposition(network=network, regions=regions)


def trivial_decomposition(network: Network) -> RegionDecomposition:
    """One singleton region per link."""
    regions = tuple(Region(ln.id, frozenset((ln.id,))) for ln in network.links)
    return RegionDecomposition(network=network, regions=regions)


def line_graph(network: Network) -> RegionGraph:
    """The line graph of the network: one vertex per link, an edge where
    one link feeds another.  Identical to the region graph of the trivial
    decomposition."""
    return region_graph(trivial_decomposition(network))


def basic_decomposition(network: Network,
                        order: Optional[Sequence[int]] = None) -> RegionDecomposition:
    """The unique decomposition where every non-head member keeps its whole
    in-set inside its region and every non-source region has two or more
    parents.

    Scans links in index order: the two source links seed the two source
    regions; each later link joins an existing region iff all its incoming
    links lie in that one region, and otherwise heads a new region.  The
    result does not depend on which valid topological order is used;
    ``order`` (a permutation of link ids with the sources first and every
    in-link before its successor) exists for exactly that cross-check.
    """
    if order is None:
        in_ptr, in_links, _ = network.csr
        owner = _accel.owner_scan(in_ptr, in_links)
        owner_of_link = {j + 1: int(owner[j]) + 1 for j in range(network.size)}
        return _decomposition_from_owner(network, owner_of_link)
    _check_order(network, order)
    owner_of_link = {}
    for position, link_id in enumerate(order):
        if position < 2:
            owner_of_link[link_id] = link_id
            continue
        ins = network.in_set(link_id)
        head = owner_of_link[ins[0]]
        for u in ins[1:]:
            if owner_of_link[u] != head:
                head = link_id
                break
        owner_of_link[link_id] = head
    return _decomposition_from_owner(network, owner_of_link)


def _check_order(network: Network, order: Sequence[int]) -> None:
    if sorted(order) != list(range(1, network.size + 1)):
        raise ValueError("order must be a permutation of all link ids")
    if tuple(order[:2]) != (1, 2):
        raise ValueError("order must start with the two source links")
    position = {link_id: i for i, link_id in enumerate(order)}
    for link_id in order:
        for u in network.in_set(link_id):
            if position[u] >= position[link_id]:
                raise ValueError(
                    f"order places link {u} after its successor {link_id}")


def validate_basic(network: Network,
                   decomposition: RegionDecomposition) -> bool:
    """Certify both defining conditions of the basic decomposition.

    Any two decompositions of one network that pass this check are equal,
    which is how uniqueness is exercised in the tests.
    """
    seen: set[int] = set()
    for region in decomposition.regions:
        if region.head not in region.links:
            raise NotAPartitionError(
                f"head {region.head} missing from its region")
        if seen & region.links:
            raise NotAPartitionError("regions overlap")
        seen |= region.links
    if seen != set(range(1, network.size + 1)):
        raise NotAPartitionError("regions do not cover the link set")

    for region in decomposition.regions:
        for link_id in region.links:
            if link_id == region.head:
                continue
            if not set(network.in_set(link_id)) <= region.links:
                return False
    graph = region_graph(decomposition)
    for j, region in enumerate(decomposition.regions):
        if region.head in (1, 2):
            continue
        if len(graph.parents[j]) < 2:
            return False
    return True


def contract(decomposition: RegionDecomposition, parent_head: int,
             child_head: int) -> RegionDecomposition:
    """Combine a parent region into its child's place: the union keeps the
    parent's head.  Raises NotAdjacentError unless the named parent region
    actually feeds the child's head."""
    by_head = {r.head: r for r in decomposition.regions}
    try:
        parent = by_head[parent_head]
        child = by_head[child_head]
    except KeyError as exc:
        raise NotAdjacentError(f"no region headed by {exc.args[0]}") from exc
    network = decomposition.network
    if parent_head == child_head or not (
            set(network.in_set(child.head)) & parent.links):
        raise NotAdjacentError(
            f"region {parent_head} is not a parent of region {child_head}")
    merged = Region(parent.head, parent.links | child.links)
    regions = tuple(sorted(
        [r for r in decomposition.regions if r.head not in (parent_head, child_head)]
        + [merged], key=lambda r: r.head))
    return RegionDecomposition(network=network, regions=regions)


def decomposition_arrays(network: Network) -> tuple[np.ndarray, int]:
    """Owner array (0-based head positions) plus region count; the raw
    form used by the benchmark path."""
    in_ptr, in_links, _ = network.csr
    owner = _accel.owner_scan(in_ptr, in_links)
    n_regions = int((owner == np.arange(owner.shape[0])).sum())
    return owner, n_regions
