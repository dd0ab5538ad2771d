"""Linear codes on region graphs and their expansion to network solutions.

A region code assigns every region a kernel: (1,0) and (0,1) to the X1/X2
regions and pairwise independent points (1,c) to the coding regions, which
works over any field with at least one more element than there are coding
regions.  Expanding a code copies each region's kernel onto all its links;
only heads of non-source regions can then be encoding links.

``brute_force_solve`` is the independent solvability oracle: exhaustive
backtracking over per-link kernel assignments, complete because a solvable
instance always has a linear solution over the bounded field order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .errors import (
    FieldTooSmallError,
    InfeasibleInputError,
    InstanceTooLargeError,
    MalformedInputError,
    UnsupportedOrderError,
)
from .gf import (
    ALPHA1,
    ALPHA2,
    ZERO_KERNEL,
    FieldSpec,
    Kernel,
    canonical_kernel,
    field_size_bound,
    format_kernel,
    in_span,
    make_field,
    parse_kernel,
    projective_points,
    smallest_supported_order,
)
from .labeling import LabeledRegionGraph, RegionKind
from .model import Network
from .regions import RegionDecomposition

CoefficientRow = tuple[tuple[int, int], ...]


@dataclass(frozen=True, eq=False)
class RegionCode:
    """Kernels per region head plus each non-source region's combination
    over its parents (by parent head)."""

    field: FieldSpec
    kernels: dict[int, Kernel]
    local_coefficients: dict[int, CoefficientRow]


@dataclass(frozen=True, eq=False)
class NetworkSolution:
    """Kernels per link plus each non-source link's combination over its
    incoming links.  encoding_links are the non-source links whose kernel
    differs from every incoming link's kernel."""

    field: FieldSpec
    kernels: dict[int, Kernel]
    local_coefficients: dict[int, CoefficientRow]
    encoding_links: frozenset[int]


@dataclass(frozen=True)
class VerificationFailure:
    link: int
    condition: str
    detail: str


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    failures: tuple[VerificationFailure, ...]

    @property
    def first_failure(self) -> Optional[VerificationFailure]:
        return self.failures[0] if self.failures else None


def construct_code(labeled: LabeledRegionGraph, field: FieldSpec) -> RegionCode:
    """Assign kernels region by region on a feasible graph.

    Coding regions take the points (1,1), (1,c2), ... in ascending head
    order; needs field order at least one more than the coding count.
    """
    graph = labeled.graph
    for i in range(graph.n):
        if labeled.kind[i] == RegionKind.SINGULAR:
            raise InfeasibleInputError(
                f"singular region headed by {graph.heads[i]}")
        if not labeled.roles[i].is_source and len(graph.parents[i]) < 2:
            raise InfeasibleInputError(
                f"region headed by {graph.heads[i]} has fewer than two "
                f"parents; normalize before constructing a code")
    coding = labeled.coding_regions
    if field.q < len(coding) + 1:
        raise FieldTooSmallError(
            f"field order {field.q} < {len(coding) + 1} needed for "
            f"{len(coding)} coding regions")
    points = projective_points(field)
    kernels: dict[int, Kernel] = {}
    for i in range(graph.n):
        head = graph.heads[i]
        if labeled.kind[i] == RegionKind.X1:
            kernels[head] = ALPHA1
        elif labeled.kind[i] == RegionKind.X2:
            kernels[head] = ALPHA2
    for j, i in enumerate(coding):
        kernels[graph.heads[i]] = points[2 + j]
    coefficients = _region_coefficients(labeled, field, kernels)
    return RegionCode(field=field, kernels=kernels,
                      local_coefficients=coefficients)


def _region_coefficients(labeled: LabeledRegionGraph, field: FieldSpec,
                         kernels: dict[int, Kernel]) -> dict[int, CoefficientRow]:
    graph = labeled.graph
    out: dict[int, CoefficientRow] = {}
    for i in range(graph.n):
        if labeled.roles[i].is_source:
            continue
        head = graph.heads[i]
        parent_heads = [graph.heads[p] for p in graph.parents[i]]
        coeffs = in_span(kernels[head],
                         [kernels[p] for p in parent_heads], field)
        if coeffs is None:
            raise AssertionError(
                f"kernel of region {head} fell outside its parents' span")
        out[head] = tuple(zip(parent_heads, coeffs))
    return out


def expand_solution(decomposition: RegionDecomposition,
                    code: RegionCode) -> NetworkSolution:
    """Copy region kernels onto links and derive per-link combinations.

    A region head combines representative in-links of the parents named by
    the region code; every other member forwards from the lowest incoming
    link inside its own region.
    """
    network = decomposition.network
    by_head = {r.head: r for r in decomposition.regions}
    kernels: dict[int, Kernel] = {}
    coefficients: dict[int, CoefficientRow] = {}
    for region in decomposition.regions:
        d = code.kernels[region.head]
        for link_id in region.links:
            kernels[link_id] = d
    for region in decomposition.regions:
        head = region.head
        if head in code.local_coefficients:
            row = []
            for parent_head, c in code.local_coefficients[head]:
                candidates = set(network.in_set(head)) & by_head[parent_head].links
                row.append((min(candidates), c))
            coefficients[head] = tuple(row)
        for link_id in sorted(region.links):
            if link_id == head or link_id in (1, 2):
                continue
            inside = set(network.in_set(link_id)) & region.links
            coefficients[link_id] = ((min(inside), 1),)
    encoding = _encoding_links(network, kernels)
    return NetworkSolution(field=code.field, kernels=kernels,
                           local_coefficients=coefficients,
                           encoding_links=encoding)


def _encoding_links(network: Network,
                    kernels: dict[int, Kernel]) -> frozenset[int]:
    out = set()
    for ln in network.links:
        if ln.is_source_link:
            continue
        d = kernels[ln.id]
        if all(kernels[u] != d for u in network.in_set(ln.id)):
            out.add(ln.id)
    return frozenset(out)


def verify_solution(network: Network,
                    solution: NetworkSolution) -> tuple[bool, VerificationReport]:
    """Check the kernel conditions and simulate every message pair.

    Condition checks: X-links must carry their session's unit kernel, and
    every non-source link's kernel must equal its stored combination of
    in-link kernels.  The simulation then pushes all q*q message pairs
    through the local combinations and demands exact decoding at every
    sink link.
    """
    field = solution.field
    failures: list[VerificationFailure] = []
    missing = [ln.id for ln in network.links if ln.id not in solution.kernels]
    if missing:
        failures.append(VerificationFailure(
            missing[0], "coverage", f"links without kernels: {missing}"))
        return False, VerificationReport(False, tuple(failures))

    for ln in network.links:
        session = network.session_of_link(ln.id)
        if session:
            expected = ALPHA1 if session == 1 else ALPHA2
            if solution.kernels[ln.id] != expected:
                failures.append(VerificationFailure(
                    ln.id, "unit-kernel",
                    f"X{session} link carries "
                    f"{format_kernel(solution.kernels[ln.id])}"))
    for ln in network.links:
        if ln.is_source_link:
            continue
        row = solution.local_coefficients.get(ln.id)
        if row is None:
            failures.append(VerificationFailure(
                ln.id, "combination", "no combination over incoming links"))
            continue
        in_set = set(network.in_set(ln.id))
        if any(u not in in_set for u, _ in row):
            failures.append(VerificationFailure(
                ln.id, "combination",
                "combination references a link that is not incoming"))
            continue
        combined = field.kernel_lincomb(
            (c, solution.kernels[u]) for u, c in row)
        if combined != solution.kernels[ln.id]:
            failures.append(VerificationFailure(
                ln.id, "combination",
                f"stored combination yields {format_kernel(combined)}, "
                f"kernel is {format_kernel(solution.kernels[ln.id])}"))

    if not failures:
        failures.extend(_simulate(network, solution))
    ok = not failures
    return ok, VerificationReport(ok, tuple(failures))


def _simulate(network: Network,
              solution: NetworkSolution) -> list[VerificationFailure]:
    field = solution.field
    failures = []
    for x1 in field.elements():
        for x2 in field.elements():
            values = {1: x1, 2: x2}
            for ln in network.links:
                if ln.is_source_link:
                    continue
                acc = 0
                for u, c in solution.local_coefficients[ln.id]:
                    acc = field.add(acc, field.mul(c, values[u]))
                values[ln.id] = acc
                session = network.session_of_sink_link.get(ln.id)
                if session and acc != (x1 if session == 1 else x2):
                    failures.append(VerificationFailure(
                        ln.id, "decoding",
                        f"sink link decodes {acc} for messages "
                        f"({x1},{x2}), wants X{session}"))
                    return failures
    return failures


def simulate_link_values(network: Network, solution: NetworkSolution,
                         x1: int, x2: int) -> dict[int, int]:
    """Values every link carries for one message pair."""
    field = solution.field
    values = {1: x1, 2: x2}
    for ln in network.links:
        if ln.is_source_link:
            continue
        acc = 0
        for u, c in solution.local_coefficients[ln.id]:
            acc = field.add(acc, field.mul(c, values[u]))
        values[ln.id] = acc
    return values


def brute_force_solve(network: Network, field: Optional[FieldSpec] = None,
                      max_real_links: int = 25) -> Optional[NetworkSolution]:
    """Exhaustive search for a linear solution; None means unsolvable.

    Source and sink links are forced to their unit kernels; every other
    link ranges over canonical representatives of its in-links' span.

    Unless a field is given, the search runs over the smallest supported
    order at least the sink-count bound, which is enough to find a
    solution whenever one exists over any field.
    """
    if network.n_real_links > max_real_links:
        raise InstanceTooLargeError(
            f"{network.n_real_links} real links exceeds the exhaustive "
            f"search guard of {max_real_links}")
    if field is None:
        field = make_field(smallest_supported_order(
            field_size_bound(network.n_sinks)))
    m = network.size
    points = projective_points(field)

    last_use = list(range(m + 1))
    for j in range(1, m + 1):
        for u in network.in_set(j):
            last_use[u] = max(last_use[u], j)
    live_at: list[list[int]] = [[] for _ in range(m + 2)]
    for j in range(3, m + 1):
        live_at[j] = [u for u in range(1, j) if last_use[u] >= j]

    assigned: dict[int, Kernel] = {1: ALPHA1, 2: ALPHA2}
    failed: set = set()

    def candidates(j: int) -> list[Kernel]:
        gens = [assigned[u] for u in network.in_set(j)]
        session = network.session_of_sink_link.get(j)
        if session:
            want = ALPHA1 if session == 1 else ALPHA2
            return [want] if in_span(want, gens, field) is not None else []
        nonzero = [g for g in gens if g != ZERO_KERNEL]
        if not nonzero:
            return [ZERO_KERNEL]
        first = canonical_kernel(field, nonzero[0])
        if all(canonical_kernel(field, g) == first for g in nonzero[1:]):
            return [ZERO_KERNEL, first]
        return [ZERO_KERNEL] + points

    def search(j: int) -> bool:
        if j > m:
            return True
        key = (j, tuple(assigned[u] for u in live_at[j]))
        if key in failed:
            return False
        for k in candidates(j):
            assigned[j] = k
            if search(j + 1):
                return True
            del assigned[j]
        failed.add(key)
        return False

    if not search(3):
        return None

    kernels = dict(assigned)
    coefficients: dict[int, CoefficientRow] = {}
    for j in range(3, m + 1):
        ins = network.in_set(j)
        coeffs = in_span(kernels[j], [kernels[u] for u in ins], field)
        if coeffs is None:
            raise AssertionError(f"search produced an invalid kernel at {j}")
        coefficients[j] = tuple(zip(ins, coeffs))
    solution = NetworkSolution(field=field, kernels=kernels,
                               local_coefficients=coefficients,
                               encoding_links=_encoding_links(network, kernels))
    ok, report = verify_solution(network, solution)
    if not ok:
        raise AssertionError(
            f"search produced an unverifiable solution: {report.failures}")
    return solution


def solution_to_document(solution: NetworkSolution) -> dict:
    return {
        "q": solution.field.q,
        "kernels": {str(link_id): format_kernel(k)
                    for link_id, k in sorted(solution.kernels.items())},
    }


def solution_to_json(solution: NetworkSolution) -> str:
    return json.dumps(solution_to_document(solution), sort_keys=True,
                      indent=2) + "\n"


def solution_from_document(network: Network, doc: dict) -> NetworkSolution:
    """Rebuild a solution from the wire form, deriving combinations.

    Links whose kernel falls outside the span of their in-links get no
    combination row, which verify_solution then reports.
    """
    if not isinstance(doc, dict) or set(doc) != {"q", "kernels"}:
        raise MalformedInputError(
            "solution document must have exactly the fields q and kernels")
    try:
        field = make_field(doc["q"])
    except UnsupportedOrderError as exc:
        raise MalformedInputError(f"bad field order {doc['q']!r}: {exc}") from exc
    if not isinstance(doc["kernels"], dict):
        raise MalformedInputError("kernels must be an object")
    kernels: dict[int, Kernel] = {}
    for key, text in doc["kernels"].items():
        try:
            link_id = int(key)
            k = parse_kernel(text)
        except (TypeError, ValueError) as exc:
            raise MalformedInputError(
                f"bad kernel entry {key!r}: {text!r}") from exc
        if not (0 <= k[0] < field.q and 0 <= k[1] < field.q):
            raise MalformedInputError(
                f"kernel {text} out of range for field order {field.q}")
        kernels[link_id] = k
    missing = [ln.id for ln in network.links if ln.id not in kernels]
    if missing:
        raise MalformedInputError(f"kernels missing for links {missing}")
    coefficients: dict[int, CoefficientRow] = {}
    for ln in network.links:
        if ln.is_source_link:
            continue
        ins = network.in_set(ln.id)
        coeffs = in_span(kernels[ln.id], [kernels[u] for u in ins], field)
        if coeffs is not None:
            coefficients[ln.id] = tuple(zip(ins, coeffs))
    return NetworkSolution(field=field, kernels=kernels,
                           local_coefficients=coefficients,
                           encoding_links=_encoding_links(network, kernels))
