"""Network instances: parsing, validation, normalization, canonical indexing.

A loaded network carries the two imaginary source links (ids 1 and 2) and
one imaginary sink link per declared sink, appended after all real links.
Real links are numbered 3.. in a deterministic topological order (ties
broken by declaration order), so every incoming link of a link has a
smaller id.  All values are immutable after construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from heapq import heappop, heappush
from typing import Optional

import numpy as np

from .errors import (
    CycleDetectedError,
    DanglingLinkError,
    MalformedInputError,
    MissingSourceError,
    NoSinksError,
)

DOCUMENT_FIELDS = ("links", "nodes", "sinks1", "sinks2", "source1", "source2")


@dataclass(frozen=True)
class Link:
    """One unit-capacity link.  Imaginary source links have tail None,
    imaginary sink links have head None."""

    id: int
    tail: Optional[str]
    head: Optional[str]

    @property
    def is_source_link(self) -> bool:
        return self.tail is None

    @property
    def is_sink_link(self) -> bool:
        return self.head is None

    @property
    def is_real(self) -> bool:
        return self.tail is not None and self.head is not None


@dataclass(frozen=True, eq=False)
class Network:
    """A validated 2-session multicast instance with canonical link ids."""

    node_names: tuple[str, ...]
    links: tuple[Link, ...]
    in_sets: tuple[tuple[int, ...], ...]
    session_of_source_link: dict[int, int]
    session_of_sink_link: dict[int, int]
    source1: str
    source2: str
    sinks1: tuple[str, ...]
    sinks2: tuple[str, ...]
    max_fan_in: int

    @property
    def size(self) -> int:
        return len(self.links)

    @property
    def n_sinks(self) -> int:
        return len(self.session_of_sink_link)

    @property
    def n_real_links(self) -> int:
        return self.size - 2 - self.n_sinks

    def link(self, link_id: int) -> Link:
        return self.links[link_id - 1]

    def in_set(self, link_id: int) -> tuple[int, ...]:
        return self.in_sets[link_id - 1]

    def session_of_link(self, link_id: int) -> int:
        """1 or 2 for X1/X2 source or sink links, 0 otherwise."""
        if link_id in self.session_of_source_link:
            return self.session_of_source_link[link_id]
        return self.session_of_sink_link.get(link_id, 0)

    def sinks_are_disjoint(self) -> bool:
        return not (set(self.sinks1) & set(self.sinks2))

    def to_document(self) -> dict:
        return {
            "nodes": list(self.node_names),
            "links": [{"tail": ln.tail, "head": ln.head}
                      for ln in self.links if ln.is_real],
            "source1": self.source1,
            "source2": self.source2,
            "sinks1": list(self.sinks1),
            "sinks2": list(self.sinks2),
        }

    def canonical_json(self) -> str:
        return json.dumps(self.to_document(), sort_keys=True, indent=2) + "\n"

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(in_ptr, in_links, sess) arrays over 0-based link positions.

        in_links[in_ptr[j]:in_ptr[j+1]] are the incoming links of link j;
        sess[j] is 1/2 for X1/X2 source or sink links, else 0.
        """
        m = self.size
        in_ptr = np.zeros(m + 1, dtype=np.int64)
        for j in range(m):
            in_ptr[j + 1] = in_ptr[j] + len(self.in_sets[j])
        in_links = np.empty(int(in_ptr[m]), dtype=np.int64)
        pos = 0
        for j in range(m):
            for u in self.in_sets[j]:
                in_links[pos] = u - 1
                pos += 1
        sess = np.zeros(m, dtype=np.int8)
        for link_id, s in self.session_of_source_link.items():
            sess[link_id - 1] = s
        for link_id, s in self.session_of_sink_link.items():
            sess[link_id - 1] = s
        return in_ptr, in_links, sess

    def __eq__(self, other) -> bool:
        return (isinstance(other, Network)
                and self.to_document() == other.to_document())


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise MalformedInputError(message)


def _validate_document(doc) -> None:
    _require(isinstance(doc, dict), "instance document must be a JSON object")
    _require(tuple(sorted(doc)) == DOCUMENT_FIELDS,
             f"instance document must have exactly the fields "
             f"{list(DOCUMENT_FIELDS)}, got {sorted(doc)}")
    _require(isinstance(doc["nodes"], list)
             and all(isinstance(n, str) and n for n in doc["nodes"]),
             "nodes must be a list of non-empty strings")
    _require(len(set(doc["nodes"])) == len(doc["nodes"]),
             "duplicate node names")
    for key in ("source1", "source2"):
        _require(isinstance(doc[key], str), f"{key} must be a string")
    for key in ("sinks1", "sinks2"):
        _require(isinstance(doc[key], list)
                 and all(isinstance(t, str) for t in doc[key]),
                 f"{key} must be a list of node names")
    _require(isinstance(doc["links"], list), "links must be a list")
    nodes = set(doc["nodes"])
    for entry in doc["links"]:
        _require(isinstance(entry, dict) and sorted(entry) == ["head", "tail"],
                 f"each link must be an object with tail and head, got {entry!r}")
        _require(entry["tail"] in nodes and entry["head"] in nodes,
                 f"link {entry!r} references an unknown node")
    for key in ("sinks1", "sinks2"):
        for t in doc[key]:
            _require(t in nodes, f"{key} entry {t!r} is not a declared node")


def network_from_document(doc: dict, max_fan_in: Optional[int] = None) -> Network:
    """Validate a parsed instance document and build the Network."""
    _validate_document(doc)
    nodes: list[str] = doc["nodes"]
    source1, source2 = doc["source1"], doc["source2"]
    if source1 not in nodes or source2 not in nodes:
        raise MissingSourceError(
            f"source nodes {source1!r}/{source2!r} must be declared nodes")
    if not doc["sinks1"] or not doc["sinks2"]:
        raise NoSinksError("both sessions need at least one sink")
    if not doc["links"]:
        raise MissingSourceError("instance has no real links")
    return _build_network(
        nodes,
        [(e["tail"], e["head"]) for e in doc["links"]],
        source1, source2,
        list(doc["sinks1"]), list(doc["sinks2"]),
        max_fan_in,
    )


def load_network(text: str, max_fan_in: Optional[int] = None) -> Network:
    """Parse an instance document and return the validated Network."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"invalid JSON: {exc}") from exc
    return network_from_document(doc, max_fan_in)


def build_network(nodes, link_pairs, source1, source2, sinks1, sinks2,
                  max_fan_in: Optional[int] = None) -> Network:
    """Build and validate a Network from in-memory parts (generator path;
    same validation and canonical indexing as loading a document)."""
    return _build_network(list(nodes), [tuple(p) for p in link_pairs],
                          source1, source2, list(sinks1), list(sinks2),
                          max_fan_in)


def _build_network(nodes, link_pairs, source1, source2, sinks1, sinks2,
                   max_fan_in) -> Network:
    n_real = len(link_pairs)
    pending_in = {u: 0 for u in nodes}
    outgoing: dict[str, list[int]] = {u: [] for u in nodes}
    incoming: dict[str, list[int]] = {u: [] for u in nodes}
    for idx, (tail, head) in enumerate(link_pairs):
        pending_in[head] += 1
        outgoing[tail].append(idx)

    for tail, head in link_pairs:
        if pending_in[tail] == 0 and tail not in (source1, source2):
            raise DanglingLinkError(
                f"link {tail}->{head}: tail has no incoming links and is "
                f"not a source")
    for t in sinks1 + sinks2:
        if pending_in[t] == 0 and t not in (source1, source2):
            raise DanglingLinkError(f"sink node {t!r} has no incoming links")

    # Topological order over real links: a link is ready once every link
    # into its tail is ordered; ties broken by declaration index.
    link_id_of: dict[int, int] = {}
    ready: list[int] = []
    for u in nodes:
        if pending_in[u] == 0:
            for idx in outgoing[u]:
                heappush(ready, idx)
    next_id = 3
    while ready:
        idx = heappop(ready)
        link_id_of[idx] = next_id
        next_id += 1
        head = link_pairs[idx][1]
        incoming[head].append(link_id_of[idx])
        pending_in[head] -= 1
        if pending_in[head] == 0:
            for out_idx in outgoing[head]:
                heappush(ready, out_idx)
    if len(link_id_of) != n_real:
        raise CycleDetectedError(
            f"{n_real - len(link_id_of)} links lie on directed cycles")

    links: list[Optional[Link]] = [None] * (n_real + 2 + len(sinks1) + len(sinks2))
    links[0] = Link(1, None, source1)
    links[1] = Link(2, None, source2)
    for idx, (tail, head) in enumerate(link_pairs):
        lid = link_id_of[idx]
        links[lid - 1] = Link(lid, tail, head)
    session_of_sink_link: dict[int, int] = {}
    sink_id = n_real + 3
    for session, sink_list in ((1, sinks1), (2, sinks2)):
        for t in sink_list:
            links[sink_id - 1] = Link(sink_id, t, None)
            session_of_sink_link[sink_id] = session
            sink_id += 1

    def links_into(node: str) -> list[int]:
        ids = list(incoming[node])
        if node == source1:
            ids.append(1)
        if node == source2:
            ids.append(2)
        return sorted(ids)

    in_sets: list[tuple[int, ...]] = []
    fan_cap = max_fan_in if max_fan_in is not None else len(links)
    for ln in links:
        ins = () if ln.tail is None else tuple(links_into(ln.tail))
        if len(ins) > fan_cap:
            raise MalformedInputError(
                f"link {ln.id} has fan-in {len(ins)} > limit {fan_cap}")
        in_sets.append(ins)

    return Network(
        node_names=tuple(nodes),
        links=tuple(links),
        in_sets=tuple(in_sets),
        session_of_source_link={1: 1, 2: 2},
        session_of_sink_link=session_of_sink_link,
        source1=source1,
        source2=source2,
        sinks1=tuple(sinks1),
        sinks2=tuple(sinks2),
        max_fan_in=fan_cap,
    )


def normalize_sinks(network: Network) -> Network:
    """Split every node demanded by both sessions into two fresh relay nodes.

    Each shared sink node t gains relay nodes and links t->t', t->t''; t is
    replaced by t' in the first session's sinks and by t'' in the second's.
    Networks with disjoint sink-node sets are returned unchanged.
    """
    shared = [t for t in dict.fromkeys(network.sinks1)
              if t in set(network.sinks2)]
    if not shared:
        return network
    nodes = list(network.node_names)
    taken = set(nodes)
    pairs = [(ln.tail, ln.head) for ln in network.links if ln.is_real]
    replacement1: dict[str, str] = {}
    replacement2: dict[str, str] = {}
    for t in shared:
        for session, repl in ((1, replacement1), (2, replacement2)):
            fresh = f"{t}__x{session}"
            while fresh in taken:
                fresh += "_"
            taken.add(fresh)
            nodes.append(fresh)
            pairs.append((t, fresh))
            repl[t] = fresh
    sinks1 = [replacement1.get(t, t) for t in network.sinks1]
    sinks2 = [replacement2.get(t, t) for t in network.sinks2]
    return _build_network(nodes, pairs, network.source1, network.source2,
                          sinks1, sinks2, None)


def index_links(network: Network) -> tuple[int, ...]:
    """Recompute the canonical link order; identity for loaded networks.

    Raises CycleDetectedError if no valid order exists (cannot happen for
    a constructed Network).
    """
    return _topological_order(network, tie_break=lambda ready: min(ready))


def _topological_order(network: Network, tie_break) -> tuple[int, ...]:
    m = network.size
    pending = [len(ins) for ins in network.in_sets]
    children: list[list[int]] = [[] for _ in range(m)]
    for j in range(m):
        for u in network.in_sets[j]:
            children[u - 1].append(j + 1)
    ready = {j + 1 for j in range(m)
             if pending[j] == 0 and j + 1 not in (1, 2)}
    order = [1, 2]
    for first in (1, 2):
        for child in children[first - 1]:
            pending[child - 1] -= 1
            if pending[child - 1] == 0:
                ready.add(child)
    while ready:
        nxt = tie_break(ready)
        ready.remove(nxt)
        order.append(nxt)
        for child in children[nxt - 1]:
            pending[child - 1] -= 1
            if pending[child - 1] == 0:
                ready.add(child)
    if len(order) != m:
        raise CycleDetectedError("link relation is cyclic")
    return tuple(order)


def random_link_order(network: Network, rng) -> tuple[int, ...]:
    """A uniformly perturbed valid topological link order (sources first)."""
    return _topological_order(
        network, tie_break=lambda ready: rng.choice(sorted(ready)))
