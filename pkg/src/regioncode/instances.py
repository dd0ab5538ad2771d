"""Instance generators: random layered networks, tight-bound region-graph
specs, and realization of specs as concrete networks.

A region-graph spec is an abstract minimal-shaped graph: one source vertex
per session, and every other vertex carries exactly two distinct parents
plus a role (coding or a session sink).  ``realize_network`` turns each
vertex into a merge-node/hub-link/relay-node gadget whose derived region
is exactly the hub link plus its outgoing relays and attached imaginary
links, so decomposing the realized network reproduces the spec graph.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from .errors import InvalidSpecError, MalformedInputError, ParamsInfeasibleError
from .labeling import LabeledRegionGraph, RegionKind
from .model import Network, build_network
from .regions import RegionDecomposition, RegionGraph

ROLES = ("x1_source", "x2_source", "x1_sink", "x2_sink", "coding")


@dataclass(frozen=True)
class SpecVertex:
    name: str
    role: str
    parents: tuple[str, ...] = ()


@dataclass(frozen=True)
class RegionGraphSpec:
    vertices: tuple[SpecVertex, ...]

    def by_name(self) -> dict[str, SpecVertex]:
        return {v.name: v for v in self.vertices}

    def to_document(self) -> dict:
        return {
            "region_spec": True,
            "vertices": [
                {"name": v.name, "role": v.role, "parents": list(v.parents)}
                for v in self.vertices
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_document(), sort_keys=True, indent=2) + "\n"


def spec_from_document(doc: dict) -> RegionGraphSpec:
    if not isinstance(doc, dict) or doc.get("region_spec") is not True \
            or set(doc) != {"region_spec", "vertices"}:
        raise MalformedInputError(
            "spec document needs region_spec: true and a vertices array")
    vertices = []
    for entry in doc["vertices"]:
        if not isinstance(entry, dict) \
                or set(entry) != {"name", "role", "parents"}:
            raise MalformedInputError(f"bad spec vertex {entry!r}")
        vertices.append(SpecVertex(entry["name"], entry["role"],
                                   tuple(entry["parents"])))
    spec = RegionGraphSpec(tuple(vertices))
    validate_spec(spec)
    return spec


def validate_spec(spec: RegionGraphSpec) -> None:
    names = [v.name for v in spec.vertices]
    if len(set(names)) != len(names):
        raise InvalidSpecError("duplicate vertex names")
    by_name = spec.by_name()
    for role in ("x1_source", "x2_source"):
        if sum(1 for v in spec.vertices if v.role == role) != 1:
            raise InvalidSpecError(f"need exactly one {role} vertex")
    if not any(v.role == "x1_sink" for v in spec.vertices):
        raise InvalidSpecError("need at least one x1_sink vertex")
    if not any(v.role == "x2_sink" for v in spec.vertices):
        raise InvalidSpecError("need at least one x2_sink vertex")
    for v in spec.vertices:
        if v.role not in ROLES:
            raise InvalidSpecError(f"unknown role {v.role!r}")
        if v.role in ("x1_source", "x2_source"):
            if v.parents:
                raise InvalidSpecError(f"source vertex {v.name} has parents")
            continue
        if len(v.parents) != 2 or len(set(v.parents)) != 2:
            raise InvalidSpecError(
                f"vertex {v.name} needs exactly two distinct parents, "
                f"got {list(v.parents)}")
        for p in v.parents:
            if p not in by_name:
                raise InvalidSpecError(
                    f"vertex {v.name} references unknown parent {p!r}")
    _toposort_names(spec)


def _toposort_names(spec: RegionGraphSpec) -> list[str]:
    by_name = spec.by_name()
    pending = {v.name: len(v.parents) for v in spec.vertices}
    children: dict[str, list[str]] = {v.name: [] for v in spec.vertices}
    for v in spec.vertices:
        for p in v.parents:
            children[p].append(v.name)
    ready = [v.name for v in spec.vertices if pending[v.name] == 0]
    order: list[str] = []
    while ready:
        name = ready.pop(0)
        order.append(name)
        for c in children[name]:
            pending[c] -= 1
            if pending[c] == 0:
                ready.append(c)
    if len(order) != len(spec.vertices):
        raise InvalidSpecError("spec graph is cyclic")
    return order


def realize_network(spec: RegionGraphSpec) -> Network:
    """Expand a spec into a concrete network via hub/relay gadgets."""
    validate_spec(spec)
    by_name = spec.by_name()
    order = _toposort_names(spec)
    nodes: list[str] = []
    pairs: list[tuple[str, str]] = []
    for name in order:
        nodes.append(f"v_{name}")
        nodes.append(f"w_{name}")
    for name in order:
        v = by_name[name]
        for p in v.parents:
            pairs.append((f"w_{p}", f"v_{name}"))
        pairs.append((f"v_{name}", f"w_{name}"))
    source1 = source2 = None
    sinks1: list[str] = []
    sinks2: list[str] = []
    for name in order:
        role = by_name[name].role
        if role == "x1_source":
            source1 = f"v_{name}"
        elif role == "x2_source":
            source2 = f"v_{name}"
        elif role == "x1_sink":
            sinks1.append(f"w_{name}")
        elif role == "x2_sink":
            sinks2.append(f"w_{name}")
    return build_network(nodes, pairs, source1, source2, sinks1, sinks2)


def realization_matches(spec: RegionGraphSpec,
                        decomposition: RegionDecomposition,
                        graph: RegionGraph,
                        labeled: LabeledRegionGraph) -> bool:
    """Role-preserving isomorphism between a spec and a derived region
    graph, via the constructive map vertex -> region owning its hub link."""
    network = decomposition.network
    hub_link = {}
    for ln in network.links:
        if ln.is_real and ln.tail.startswith("v_") and ln.head.startswith("w_"):
            if ln.tail[2:] == ln.head[2:]:
                hub_link[ln.tail[2:]] = ln.id
    if set(hub_link) != {v.name for v in spec.vertices}:
        return False
    region_of = {name: decomposition.owner[link_id]
                 for name, link_id in hub_link.items()}
    if len(set(region_of.values())) != len(region_of) \
            or len(region_of) != len(decomposition.regions):
        return False
    spec_edges = {(region_of[p], region_of[v.name])
                  for v in spec.vertices for p in v.parents}
    if spec_edges != set(graph.edges):
        return False
    for v in spec.vertices:
        i = region_of[v.name]
        roles = labeled.roles[i]
        flags = (roles.x1_source, roles.x2_source, roles.x1_sink, roles.x2_sink)
        want = (v.role == "x1_source", v.role == "x2_source",
                v.role == "x1_sink", v.role == "x2_sink")
        if flags != want:
            return False
    return True


def gen_tight_encoding(n: int) -> RegionGraphSpec:
    """Minimal-shaped graph with n coding regions attaining the
    encoding-link bound: N = 2 sinks for n = 1, else N = n + 2 sinks and
    2N - 2 encoding links.

    For n >= 2 the coding regions form a chain where consecutive pairs
    share a fresh session-2 sink child and each next coding region is the
    common child of its predecessor and a session-2 sink."""
    if n < 1:
        raise ValueError("need at least one coding region")
    v = [SpecVertex("S1", "x1_source"), SpecVertex("S2", "x2_source"),
         SpecVertex("Q1", "coding", ("S1", "S2"))]
    if n == 1:
        v.append(SpecVertex("A1", "x1_sink", ("S2", "Q1")))
        v.append(SpecVertex("B1", "x2_sink", ("S1", "Q1")))
        return RegionGraphSpec(tuple(v))
    v.append(SpecVertex("P1", "x2_sink", ("S1", "Q1")))
    for j in range(1, n):
        feeder = "P1" if j == 1 else f"C{j - 1}"
        v.append(SpecVertex(f"Q{j + 1}", "coding", (f"Q{j}", feeder)))
        v.append(SpecVertex(f"C{j}", "x2_sink", (f"Q{j}", f"Q{j + 1}")))
    v.append(SpecVertex("A1", "x1_sink", (f"Q{n}", "S2")))
    v.append(SpecVertex("A2", "x2_sink", (f"Q{n}", "A1")))
    return RegionGraphSpec(tuple(v))


def gen_tight_field(n: int) -> RegionGraphSpec:
    """Extend the tight-encoding chain so all coding regions pairwise
    share session-2 sink children: any code then needs n + 2 pairwise
    independent kernels, forcing field order at least n + 1.  Total sinks
    N = (n^2 + n + 2) / 2."""
    if n < 2:
        raise ValueError("need at least two coding regions")
    v = list(gen_tight_encoding(n).vertices)
    for j in range(2, n):
        v.append(SpecVertex(f"T{j}", "x2_sink", ("S1", f"Q{j}")))
    for i in range(1, n + 1):
        for j in range(i + 2, n + 1):
            v.append(SpecVertex(f"W{i}_{j}", "x2_sink", (f"Q{i}", f"Q{j}")))
    return RegionGraphSpec(tuple(v))


def gen_random_spec(seed: int, max_interior: int = 8) -> RegionGraphSpec:
    """Seeded random minimal-shaped spec (for round-trip testing)."""
    rng = random.Random(seed)
    k = rng.randint(2, max_interior)
    vertices = [SpecVertex("S1", "x1_source"), SpecVertex("S2", "x2_source")]
    names = ["S1", "S2"]
    roles = []
    for t in range(k):
        roles.append(rng.choice(("coding", "x1_sink", "x2_sink")))
    if "x1_sink" not in roles:
        roles[-1] = "x1_sink"
    if "x2_sink" not in roles:
        roles[0 if len(roles) == 1 else -2] = "x2_sink"
    for t, role in enumerate(roles):
        name = f"V{t + 1}"
        parents = tuple(rng.sample(names, 2))
        vertices.append(SpecVertex(name, role, parents))
        names.append(name)
    spec = RegionGraphSpec(tuple(vertices))
    validate_spec(spec)
    return spec


@dataclass(frozen=True)
class GenParams:
    node_count: int
    link_count: int
    sinks1: int = 1
    sinks2: int = 1
    seed: int = 0


def gen_random(params: GenParams) -> Network:
    """Seeded random layered network instance.

    Layer 0 holds the two source nodes; every interior node draws one
    skeleton in-link from an earlier layer (the first two from the two
    sources), extra links fill the budget, and sinks are sampled from the
    deepest layers.  The same parameters always produce the same network.
    """
    interior = params.node_count - 2
    if interior < 2:
        raise ParamsInfeasibleError("need at least two interior nodes")
    if params.sinks1 < 1 or params.sinks2 < 1:
        raise ParamsInfeasibleError("each session needs at least one sink")
    if params.sinks1 + params.sinks2 > interior:
        raise ParamsInfeasibleError(
            f"{params.sinks1 + params.sinks2} sinks exceed "
            f"{interior} interior nodes")
    if params.link_count < interior:
        raise ParamsInfeasibleError(
            f"{params.link_count} links cannot reach "
            f"{interior} interior nodes")
    rng = random.Random(params.seed)
    names = [f"n{i}" for i in range(1, interior + 1)]
    n_layers = rng.randint(2, max(2, min(6, interior)))
    layers: list[list[str]] = [["s1", "s2"]] + [[] for _ in range(n_layers)]
    layer_of = {"s1": 0, "s2": 0}
    for idx, name in enumerate(names):
        layer = idx % n_layers + 1 if idx < n_layers \
            else rng.randint(1, n_layers)
        layers[layer].append(name)
        layer_of[name] = layer
    # pool[l] = every node in layers strictly before l, in layer order
    pool: list[list[str]] = [[]]
    for layer in layers:
        pool.append(pool[-1] + layer)

    pairs: list[tuple[str, str]] = []
    for idx, name in enumerate(names):
        if idx == 0:
            tail = "s1"
        elif idx == 1:
            tail = "s2"
        else:
            tail = rng.choice(pool[layer_of[name]])
        pairs.append((tail, name))
    for _ in range(params.link_count - interior):
        head = rng.choice(names)
        pairs.append((rng.choice(pool[layer_of[head]]), head))

    deep_first = sorted(names, key=lambda u: (-layer_of[u], u))
    pool = deep_first[:max(params.sinks1 + params.sinks2, interior // 2)]
    chosen = rng.sample(pool, params.sinks1 + params.sinks2)
    sinks1 = chosen[:params.sinks1]
    sinks2 = chosen[params.sinks1:]
    return build_network(["s1", "s2"] + names, pairs, "s1", "s2",
                         sinks1, sinks2)
