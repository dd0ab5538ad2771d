"""Region-graph minimization, structural audits, and complexity bounds.

Minimization repeatedly applies the first single edit (an in-edge deletion,
then an adjacent combination, scanning regions in ascending head order)
that keeps the graph feasible, until no single edit does.  On the resulting
minimal graphs strong local structure holds: every non-source region has
exactly two parents, same-session regions never touch, adjacent coding
regions share a child.  Those properties bound the coding-region count by
max(1, N-2) and the encoding-link count by max(3, 2N-2) for N sinks, and
the chromatic number of the associated conflict graph bounds the field
order needed for a linear code.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from .codes import NetworkSolution, RegionCode, _region_coefficients
from .errors import FieldTooSmallError, GraphTooLargeError
from .gf import (
    FieldSpec,
    field_size_bound,
    projective_points,
    smallest_supported_order,
)
from .labeling import (
    LabeledRegionGraph,
    RegionKind,
    WorkGraph,
    classify,
    require_feasible,
)
from .model import Network
from .regions import (
    Region,
    RegionDecomposition,
    RegionGraph,
    _graph_from_parent_sets,
)

Edit = tuple[str, int, int]  # ("delete" | "combine", parent head, child head)


def _candidate_edits(work: WorkGraph) -> list[Edit]:
    out: list[Edit] = []
    for q in work.non_source_heads():
        for p in sorted(work.parents[q]):
            out.append(("delete", p, q))
        for p in sorted(work.parents[q]):
            out.append(("combine", p, q))
    return out


def _apply_edit(work: WorkGraph, edit: Edit) -> None:
    op, p, q = edit
    if op == "delete":
        work.delete_edge(p, q)
    else:
        work.combine(p, q)


def _edit_keeps_feasible(work: WorkGraph, edit: Edit) -> bool:
    probe = work.copy()
    _apply_edit(probe, edit)
    return probe.normalized_feasible()


def _first_feasible_edit(work: WorkGraph,
                         rng: Optional[random.Random]) -> Optional[Edit]:
    candidates = _candidate_edits(work)
    if rng is not None:
        rng.shuffle(candidates)
    for edit in candidates:
        if _edit_keeps_feasible(work, edit):
            return edit
    return None


def minimize(labeled: LabeledRegionGraph,
             decomposition: Optional[RegionDecomposition] = None,
             seed: Optional[int] = None
             ) -> tuple[RegionDecomposition, RegionGraph]:
    """Reduce a feasible region graph until no single edit stays feasible.

    The default edit order is deterministic; pass a seed to explore a
    randomized order (different orders may reach structurally different
    minimal graphs).  The returned graph may carry fewer edges than the
    returned decomposition would recompute, reflecting accepted deletions.
    """
    if decomposition is None:
        decomposition = labeled.decomposition
    require_feasible(labeled)
    work = WorkGraph.from_labeled(labeled)
    rng = random.Random(seed) if seed is not None else None
    while True:
        edit = _first_feasible_edit(work, rng)
        if edit is None:
            break
        _apply_edit(work, edit)
    return _materialize(decomposition.network, work)


def _materialize(network: Network,
                 work: WorkGraph) -> tuple[RegionDecomposition, RegionGraph]:
    heads = work.sorted_heads()
    regions = tuple(Region(h, work.links[h]) for h in heads)
    decomposition = RegionDecomposition(network=network, regions=regions)
    index = {h: i for i, h in enumerate(heads)}
    parent_sets = [{index[p] for p in work.parents[h]} for h in heads]
    graph = _graph_from_parent_sets(heads, parent_sets)
    return decomposition, graph


def check_minimal(labeled: LabeledRegionGraph) -> tuple[bool, Optional[Edit]]:
    """True iff every single edge deletion and every single adjacent
    combination destroys feasibility; otherwise the first surviving edit
    is the witness."""
    require_feasible(labeled)
    work = WorkGraph.from_labeled(labeled)
    edit = _first_feasible_edit(work, None)
    return edit is None, edit


@dataclass(frozen=True)
class AuditItem:
    name: str
    passed: bool
    witness: str = ""


@dataclass
class MinimalityReport:
    n_coding: int
    n_sink_regions: int
    n_sinks: int
    bound_coding: int
    bound_encoding: int
    audits: list[AuditItem] = field(default_factory=list)
    encoding_link_count: Optional[int] = None
    field_order_used: Optional[int] = None
    field_bound: Optional[int] = None

    @property
    def all_passed(self) -> bool:
        return all(item.passed for item in self.audits)

    def failed(self) -> list[AuditItem]:
        return [item for item in self.audits if not item.passed]

    def to_document(self) -> dict:
        return {
            "n_coding": self.n_coding,
            "n_sink_regions": self.n_sink_regions,
            "n_sinks": self.n_sinks,
            "bound_coding": self.bound_coding,
            "bound_encoding": self.bound_encoding,
            "encoding_link_count": self.encoding_link_count,
            "field_order_used": self.field_order_used,
            "field_bound": self.field_bound,
            "audits": [
                {"name": a.name, "passed": a.passed, "witness": a.witness}
                for a in self.audits
            ],
        }


def structural_audit(minimal: LabeledRegionGraph) -> MinimalityReport:
    """Check every structural property a minimal feasible graph must have.

    Failures signal an implementation bug, not a property of the input
    network, so they are returned as report entries rather than raised.
    """
    graph = minimal.graph
    n = graph.n
    heads = graph.heads
    x1, x2 = minimal.x1, minimal.x2
    coding = [i for i in range(n) if minimal.kind[i] == RegionKind.CODING]
    sink_regions = [i for i in range(n)
                    if minimal.roles[i].x1_sink or minimal.roles[i].x2_sink]
    n_sinks = minimal.decomposition.network.n_sinks
    report = MinimalityReport(
        n_coding=len(coding),
        n_sink_regions=len(sink_regions),
        n_sinks=n_sinks,
        bound_coding=max(1, n_sinks - 2),
        bound_encoding=max(3, 2 * n_sinks - 2),
    )
    audits = report.audits
    children = [set(graph.children[i]) for i in range(n)]

    def adjacent(i: int, j: int) -> bool:
        return (i, j) in graph.edges or (j, i) in graph.edges

    bad = [heads[i] for i in range(n)
           if not minimal.roles[i].is_source and len(graph.parents[i]) != 2]
    audits.append(AuditItem(
        "non_source_regions_have_exactly_two_parents", not bad,
        f"violators {bad}" if bad else ""))

    clashes = []
    for session, members in ((1, sorted(x1)), (2, sorted(x2))):
        for a_pos, i in enumerate(members):
            for j in members[a_pos + 1:]:
                if adjacent(i, j) or (children[i] & children[j]):
                    clashes.append((session, heads[i], heads[j]))
    audits.append(AuditItem(
        "same_session_regions_never_adjacent_or_share_a_child", not clashes,
        f"violators {clashes}" if clashes else ""))

    missing = []
    for a_pos, i in enumerate(coding):
        for j in coding[a_pos + 1:]:
            if adjacent(i, j) and not (children[i] & children[j]):
                missing.append((heads[i], heads[j]))
    audits.append(AuditItem(
        "adjacent_coding_regions_share_a_child", not missing,
        f"violators {missing}" if missing else ""))

    no_witness = []
    for i in coding:
        for session, members in ((1, x1), (2, x2)):
            touches = any(adjacent(i, j) for j in members)
            if not touches:
                continue
            shares = any(children[i] & children[j] for j in members)
            if not shares:
                no_witness.append((heads[i], session))
    audits.append(AuditItem(
        "coding_region_adjacent_to_session_shares_a_child_with_it",
        not no_witness, f"violators {no_witness}" if no_witness else ""))

    misfits = []
    for i in range(n):
        roles = minimal.roles[i]
        if i in x1 and not (roles.x1_source or roles.x1_sink):
            misfits.append((heads[i], 1))
        if i in x2 and not (roles.x2_source or roles.x2_sink):
            misfits.append((heads[i], 2))
    audits.append(AuditItem(
        "labeled_regions_are_source_or_sink_of_their_session", not misfits,
        f"violators {misfits}" if misfits else ""))

    short = []
    for i in coding:
        sink_children = [c for c in children[i] if c in sink_regions]
        if len(sink_children) < 2:
            short.append(heads[i])
    audits.append(AuditItem(
        "coding_regions_have_two_sink_region_children", not short,
        f"violators {short}" if short else ""))

    broken = []
    for i in coding:
        if any(c in coding for c in children[i]):
            continue
        ok1 = any(
            c in x1 and minimal.roles[c].x1_sink
            and any(p in x2 for p in graph.parents[c])
            for c in children[i])
        ok2 = any(
            c in x2 and minimal.roles[c].x2_sink
            and any(p in x1 for p in graph.parents[c])
            for c in children[i])
        if not (ok1 and ok2):
            broken.append(heads[i])
    audits.append(AuditItem(
        "bottom_coding_regions_feed_crosswise_decodable_sinks", not broken,
        f"violators {broken}" if broken else ""))

    if coding:
        shared = bool(children[0] & children[1])
        audits.append(AuditItem(
            "source_regions_share_a_child", shared,
            "" if shared else "no common child of the two source regions"))
    if n >= 3:
        third_ok = graph.parents[2] == (0, 1)
        audits.append(AuditItem(
            "third_region_is_common_child_of_both_sources", third_ok,
            "" if third_ok else f"parents {graph.parents[2]}"))

    audits.append(AuditItem(
        "coding_count_within_bound",
        len(coding) <= report.bound_coding,
        f"{len(coding)} > {report.bound_coding}"
        if len(coding) > report.bound_coding else ""))

    if coding:
        omega = associated_graph(minimal)
        low = [omega.labels[v] for v in range(len(omega.labels))
               if omega.degree(v) < 2]
        audits.append(AuditItem(
            "associated_graph_degrees_at_least_two", not low,
            f"violators {low}" if low else ""))
    return report


@dataclass(frozen=True)
class AssociatedGraph:
    """Undirected conflict graph over the two message classes and the
    coding regions: the message pair is joined (red); coding regions
    sharing a child are joined (blue); a coding region sharing a child
    with a labeled region is joined to that session's class (green)."""

    labels: tuple[str, ...]
    coding_heads: tuple[int, ...]
    edges: frozenset[tuple[int, int]]
    colors: dict[tuple[int, int], str]

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    @property
    def n(self) -> int:
        return len(self.labels)


def associated_graph(minimal: LabeledRegionGraph) -> AssociatedGraph:
    graph = minimal.graph
    heads = graph.heads
    coding = [i for i in range(graph.n)
              if minimal.kind[i] == RegionKind.CODING]
    children = [set(graph.children[i]) for i in range(graph.n)]
    x1_children = set().union(*(children[i] for i in minimal.x1)) \
        if minimal.x1 else set()
    x2_children = set().union(*(children[i] for i in minimal.x2)) \
        if minimal.x2 else set()
    labels = ("X1", "X2") + tuple(f"Q{heads[i]}" for i in coding)
    edges = {(0, 1)}
    colors = {(0, 1): "red"}
    for a_pos, i in enumerate(coding):
        va = 2 + a_pos
        for b_pos in range(a_pos + 1, len(coding)):
            j = coding[b_pos]
            if children[i] & children[j]:
                e = (va, 2 + b_pos)
                edges.add(e)
                colors[e] = "blue"
        if children[i] & x1_children:
            e = (0, va)
            edges.add(e)
            colors[e] = "green"
        if children[i] & x2_children:
            e = (1, va)
            edges.add(e)
            colors[e] = "green"
    return AssociatedGraph(
        labels=labels,
        coding_heads=tuple(heads[i] for i in coding),
        edges=frozenset(edges),
        colors=colors,
    )


@dataclass(frozen=True)
class Coloring:
    assignment: dict[int, int]
    chi: int


def chromatic_number(omega: AssociatedGraph) -> Coloring:
    """Exact chromatic number via branch and bound (guarded at 64
    vertices): greedy clique lower bound, saturation-greedy upper bound,
    then k-colorability search between them."""
    n = omega.n
    if n > 64:
        raise GraphTooLargeError(f"{n} vertices exceeds the exact guard")
    adj: list[set[int]] = [set() for _ in range(n)]
    for a, b in omega.edges:
        adj[a].add(b)
        adj[b].add(a)

    by_degree = sorted(range(n), key=lambda v: (-len(adj[v]), v))
    clique: list[int] = []
    for v in by_degree:
        if all(u in adj[v] for u in clique):
            clique.append(v)
    lower = max(1, len(clique))

    greedy = _dsatur(n, adj)
    upper = max(greedy.values()) + 1 if greedy else 1

    best = greedy
    chi = upper
    for k in range(lower, upper):
        order = clique + [v for v in by_degree if v not in clique]
        attempt = _k_coloring(order, adj, k)
        if attempt is not None:
            best = attempt
            chi = k
            break
    return Coloring(assignment=best, chi=chi)


def _dsatur(n: int, adj: list[set[int]]) -> dict[int, int]:
    colors: dict[int, int] = {}
    while len(colors) < n:
        pick = max(
            (v for v in range(n) if v not in colors),
            key=lambda v: (len({colors[u] for u in adj[v] if u in colors}),
                           len(adj[v]), -v))
        used = {colors[u] for u in adj[pick] if u in colors}
        c = 0
        while c in used:
            c += 1
        colors[pick] = c
    return colors


def _k_coloring(order: list[int], adj: list[set[int]],
                k: int) -> Optional[dict[int, int]]:
    colors: dict[int, int] = {}

    def backtrack(idx: int, max_used: int) -> bool:
        if idx == len(order):
            return True
        v = order[idx]
        taken = {colors[u] for u in adj[v] if u in colors}
        for c in range(min(max_used + 1, k - 1) + 1):
            if c in taken:
                continue
            colors[v] = c
            if backtrack(idx + 1, max(max_used, c)):
                return True
            del colors[v]
        return False

    return colors if backtrack(0, -1) else None


def code_from_coloring(minimal: LabeledRegionGraph, coloring: Coloring,
                       field: FieldSpec) -> RegionCode:
    """Turn a proper coloring of the associated graph into a region code:
    colors map injectively onto the pairwise independent kernels, with the
    two message classes pinned to (1,0) and (0,1)."""
    if field.q + 1 < coloring.chi:
        raise FieldTooSmallError(
            f"field order {field.q} supports {field.q + 1} pairwise "
            f"independent kernels, coloring needs {coloring.chi}")
    c_x1 = coloring.assignment[0]
    c_x2 = coloring.assignment[1]
    if c_x1 == c_x2:
        raise ValueError("coloring does not separate the message classes")
    palette = projective_points(field)
    mapping = {c_x1: palette[0], c_x2: palette[1]}
    spare = iter(palette[2:])
    for c in sorted(set(coloring.assignment.values()) - {c_x1, c_x2}):
        mapping[c] = next(spare)
    graph = minimal.graph
    coding = [i for i in range(graph.n)
              if minimal.kind[i] == RegionKind.CODING]
    kernels = {}
    for i in range(graph.n):
        head = graph.heads[i]
        if i in minimal.x1:
            kernels[head] = palette[0]
        elif i in minimal.x2:
            kernels[head] = palette[1]
    for pos, i in enumerate(coding):
        kernels[graph.heads[i]] = mapping[coloring.assignment[2 + pos]]
    coefficients = _region_coefficients(minimal, field, kernels)
    return RegionCode(field=field, kernels=kernels,
                      local_coefficients=coefficients)


def bounds_report(network: Network, minimal: LabeledRegionGraph,
                  solution: NetworkSolution) -> MinimalityReport:
    """Structural audit plus the encoding-link and field-size bound checks
    for a concrete expanded solution."""
    report = structural_audit(minimal)
    report.encoding_link_count = len(solution.encoding_links)
    report.field_order_used = solution.field.q
    report.field_bound = smallest_supported_order(
        field_size_bound(network.n_sinks))
    report.audits.append(AuditItem(
        "encoding_links_within_bound",
        report.encoding_link_count <= report.bound_encoding,
        f"{report.encoding_link_count} > {report.bound_encoding}"
        if report.encoding_link_count > report.bound_encoding else ""))
    report.audits.append(AuditItem(
        "field_order_within_bound",
        report.field_order_used <= report.field_bound,
        f"{report.field_order_used} > {report.field_bound}"
        if report.field_order_used > report.field_bound else ""))
    try:
        chi = chromatic_number(associated_graph(minimal)).chi
        report.audits.append(AuditItem(
            "chromatic_number_within_field",
            chi - 1 <= report.field_order_used,
            f"chi {chi} - 1 > field order {report.field_order_used}"
            if chi - 1 > report.field_order_used else ""))
    except GraphTooLargeError:
        report.audits.append(AuditItem(
            "chromatic_number_within_field", True,
            "skipped: associated graph over the exact-coloring guard"))
    return report
