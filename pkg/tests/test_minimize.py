import itertools

import pytest

import regioncode as rc
from conftest import PARALLEL_DOC, load, solve_pipeline
from regioncode.errors import FieldTooSmallError, InfeasibleInputError
from regioncode.labeling import WorkGraph
from regioncode.minimize import (
    _apply_edit,
    _candidate_edits,
    _edit_keeps_feasible,
    associated_graph,
    bounds_report,
    check_minimal,
    chromatic_number,
    code_from_coloring,
    minimize,
    structural_audit,
)


def minimize_pipeline(net, seed=None):
    d, g, labeled = solve_pipeline(net)
    mdec, mgraph = minimize(labeled, seed=seed)
    return rc.classify(mgraph, mdec)


def test_butterfly_already_minimal(butterfly):
    _, _, labeled = solve_pipeline(butterfly)
    is_minimal, witness = check_minimal(labeled)
    assert is_minimal and witness is None
    mdec, mgraph = minimize(labeled)
    assert mdec.regions == labeled.decomposition.regions
    assert mgraph.edges == labeled.graph.edges


def test_minimize_rejects_infeasible(bottleneck):
    _, _, labeled = solve_pipeline(bottleneck)
    with pytest.raises(InfeasibleInputError):
        minimize(labeled)
    with pytest.raises(InfeasibleInputError):
        check_minimal(labeled)


def test_check_minimal_witness_on_non_minimal():
    net = load(PARALLEL_DOC)
    _, _, labeled = solve_pipeline(net)
    is_minimal, witness = check_minimal(labeled)
    assert not is_minimal
    assert witness is not None and witness[0] in ("delete", "combine")


def test_minimize_parallel_network():
    net = load(PARALLEL_DOC)
    mlabeled = minimize_pipeline(net)
    assert check_minimal(mlabeled)[0]
    assert len(mlabeled.coding_regions) <= 1
    report = structural_audit(mlabeled)
    assert report.all_passed, report.failed()
    # the optimal solution still decodes on the original network
    coloring = chromatic_number(associated_graph(mlabeled))
    q = rc.smallest_supported_order(max(2, coloring.chi - 1))
    code = code_from_coloring(mlabeled, coloring, rc.make_field(q))
    solution = rc.expand_solution(mlabeled.decomposition, code)
    assert rc.verify_solution(net, solution)[0]


def _graph_state(work: WorkGraph):
    return frozenset(
        (head, work.links[head], frozenset(work.parents[head]))
        for head in work.sorted_heads())


def _explore_all_edit_sequences(labeled, cap=4000):
    """Every graph reachable by feasibility-preserving single edits, and
    the subset where no further edit applies (the terminal graphs)."""
    start = WorkGraph.from_labeled(labeled)
    seen = {_graph_state(start)}
    queue = [start]
    terminals = []
    while queue:
        work = queue.pop()
        moved = False
        for edit in _candidate_edits(work):
            if not _edit_keeps_feasible(work, edit):
                continue
            moved = True
            nxt = work.copy()
            _apply_edit(nxt, edit)
            state = _graph_state(nxt)
            if state not in seen:
                seen.add(state)
                queue.append(nxt)
                if len(seen) > cap:
                    raise AssertionError("edit space larger than expected")
        if not moved:
            terminals.append(work)
    return terminals


def test_routing_only_network_collapses_to_two_regions():
    # every demand is routable, so exhaustive editing always ends at the
    # bare two-region graph, and so does the deterministic pass
    spec = rc.RegionGraphSpec((
        rc.SpecVertex("S1", "x1_source"),
        rc.SpecVertex("S2", "x2_source"),
        rc.SpecVertex("W1", "x1_sink", ("S1", "S2")),
        rc.SpecVertex("W2", "x2_sink", ("S1", "S2")),
        rc.SpecVertex("W3", "x1_sink", ("S1", "W1")),
    ))
    net = rc.realize_network(spec)
    d, g, labeled = solve_pipeline(net)
    assert len(labeled.coding_regions) == 0
    terminals = _explore_all_edit_sequences(labeled)
    sizes = {len(t.links) for t in terminals}
    assert min(sizes) == 2
    mlabeled = minimize_pipeline(net)
    assert mlabeled.graph.n == 2
    assert len(mlabeled.graph.edges) == 0
    assert check_minimal(mlabeled)[0]


def test_minimize_output_is_reachable_terminal(butterfly):
    # on a small non-minimal instance the deterministic result must be one
    # of the exhaustively enumerated terminal graphs
    net = load(PARALLEL_DOC)
    _, _, labeled = solve_pipeline(net)
    terminals = _explore_all_edit_sequences(labeled)
    terminal_states = {_graph_state(t) for t in terminals}
    mlabeled = minimize_pipeline(net)
    state = _graph_state(WorkGraph.from_labeled(mlabeled))
    assert state in terminal_states


def test_minimize_randomized_orders_stay_minimal():
    net = load(PARALLEL_DOC)
    _, _, labeled = solve_pipeline(net)
    shapes = set()
    for seed in range(8):
        mdec, mgraph = minimize(labeled, seed=seed)
        mlabeled = rc.classify(mgraph, mdec)
        assert check_minimal(mlabeled)[0]
        assert structural_audit(mlabeled).all_passed
        shapes.add((mgraph.n, len(mgraph.edges)))
    assert shapes  # different orders may or may not coincide; all minimal


def test_structural_audit_butterfly(butterfly):
    mlabeled = minimize_pipeline(butterfly)
    report = structural_audit(mlabeled)
    assert report.all_passed, report.failed()
    assert report.n_coding == 1
    assert report.n_sinks == 2
    assert report.bound_coding == 1
    assert report.bound_encoding == 3


def test_associated_graph_butterfly(butterfly):
    mlabeled = minimize_pipeline(butterfly)
    omega = associated_graph(mlabeled)
    assert omega.labels == ("X1", "X2", "Q7")
    assert omega.edges == frozenset({(0, 1), (0, 2), (1, 2)})
    assert omega.colors[(0, 1)] == "red"
    assert omega.colors[(0, 2)] == "green"
    assert omega.colors[(1, 2)] == "green"


def test_associated_graph_without_coding_regions(two_chains):
    mlabeled = minimize_pipeline(two_chains)
    omega = associated_graph(mlabeled)
    assert omega.labels == ("X1", "X2")
    assert omega.edges == frozenset({(0, 1)})


def test_chromatic_triangle_and_edge(two_chains, butterfly):
    omega = associated_graph(minimize_pipeline(butterfly))
    assert chromatic_number(omega).chi == 3
    single = associated_graph(minimize_pipeline(two_chains))
    assert chromatic_number(single).chi == 2


def test_chromatic_on_tight_field_clique():
    net = rc.realize_network(rc.gen_tight_field(4))
    _, _, labeled = solve_pipeline(net)
    omega = associated_graph(labeled)
    assert omega.n == 6
    assert len(omega.edges) == 15
    assert chromatic_number(omega).chi == 6


def _brute_force_chi(n, edges):
    for k in range(1, n + 1):
        for assignment in itertools.product(range(k), repeat=n):
            if all(assignment[a] != assignment[b] for a, b in edges):
                return k
    return n


def test_chromatic_matches_exhaustive_oracle():
    import random
    rng = random.Random(0)
    for trial in range(25):
        n = rng.randint(1, 6)
        pairs = list(itertools.combinations(range(n), 2))
        edges = frozenset(p for p in pairs if rng.random() < 0.5)
        omega = rc.AssociatedGraph(
            labels=tuple(f"V{i}" for i in range(n)),
            coding_heads=(),
            edges=edges,
            colors={e: "blue" for e in edges},
        )
        got = chromatic_number(omega)
        assert got.chi == _brute_force_chi(n, edges)
        for a, b in edges:
            assert got.assignment[a] != got.assignment[b]
        assert len(set(got.assignment.values())) == got.chi


def test_code_from_coloring_butterfly(butterfly):
    mlabeled = minimize_pipeline(butterfly)
    coloring = chromatic_number(associated_graph(mlabeled))
    code = code_from_coloring(mlabeled, coloring, rc.make_field(2))
    assert code.kernels == {1: (1, 0), 2: (0, 1), 7: (1, 1),
                            10: (1, 0), 11: (0, 1)}


def test_code_from_coloring_field_guard():
    net = rc.realize_network(rc.gen_tight_field(2))
    _, _, labeled = solve_pipeline(net)
    coloring = chromatic_number(associated_graph(labeled))
    assert coloring.chi == 4
    with pytest.raises(FieldTooSmallError):
        code_from_coloring(labeled, coloring, rc.make_field(2))
    code = code_from_coloring(labeled, coloring, rc.make_field(3))
    solution = rc.expand_solution(labeled.decomposition, code)
    assert rc.verify_solution(net, solution)[0]


def test_bounds_report_butterfly(butterfly):
    net = butterfly
    mlabeled = minimize_pipeline(net)
    code = rc.construct_code(mlabeled, rc.make_field(2))
    solution = rc.expand_solution(mlabeled.decomposition, code)
    report = bounds_report(net, mlabeled, solution)
    assert report.all_passed, report.failed()
    assert report.encoding_link_count == 3 == report.bound_encoding
    assert report.field_order_used == 2 == report.field_bound


def test_bounds_report_tight_encoding_two():
    net = rc.realize_network(rc.gen_tight_encoding(2))
    mlabeled = minimize_pipeline(net)
    code = rc.construct_code(mlabeled, rc.make_field(4))
    solution = rc.expand_solution(mlabeled.decomposition, code)
    report = bounds_report(net, mlabeled, solution)
    assert report.all_passed, report.failed()
    assert report.n_sinks == 4
    assert report.encoding_link_count == 6 == report.bound_encoding


def test_minimize_random_instances_reach_certified_fixpoints():
    for seed in range(20):
        net = rc.gen_random(rc.GenParams(9 + seed % 3, 13 + seed % 5,
                                         1 + seed % 2, 1, seed))
        d, g, labeled = solve_pipeline(net)
        if not rc.feasibility(labeled):
            continue
        mdec, mgraph = minimize(labeled)
        mlabeled = rc.classify(mgraph, mdec)
        assert check_minimal(mlabeled)[0]
        report = structural_audit(mlabeled)
        assert report.all_passed, (seed, report.failed())
        coloring = chromatic_number(associated_graph(mlabeled))
        q = rc.smallest_supported_order(max(2, coloring.chi - 1))
        code = code_from_coloring(mlabeled, coloring, rc.make_field(q))
        solution = rc.expand_solution(mdec, code)
        assert rc.verify_solution(net, solution)[0], seed
