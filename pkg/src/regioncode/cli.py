"""Command-line front end.

Subcommands: solve, decompose, minimize, bounds, gen, verify, bench.
Exit codes: 0 solvable / verified, 2 unsolvable / verification failure,
1 any error.  Report files are canonical (byte-identical for identical
inputs and flags); stage timings go to stdout only.
"""

from __future__ import annotations

import argparse
import json
import os
import statistics
import sys
import time
from pathlib import Path

from . import _accel, dot
from .codes import (
    brute_force_solve,
    construct_code,
    expand_solution,
    solution_from_document,
    solution_to_json,
    verify_solution,
)
from .errors import RegioncodeError
from .gf import field_size_bound, make_field, smallest_supported_order
from .instances import (
    GenParams,
    gen_random,
    gen_tight_encoding,
    gen_tight_field,
    realize_network,
    spec_from_document,
)
from .labeling import RegionKind, classify, feasibility
from .minimize import (
    associated_graph,
    bounds_report,
    chromatic_number,
    code_from_coloring,
    minimize,
)
from .model import Network, load_network, network_from_document, normalize_sinks
from .regions import basic_decomposition, line_graph, region_graph


def load_instance_path(path: str) -> Network:
    """Load an instance file; a region-spec document is realized first."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RegioncodeError(f"{path}: invalid JSON: {exc}") from exc
    if isinstance(doc, dict) and doc.get("region_spec") is True:
        return realize_network(spec_from_document(doc))
    return network_from_document(doc)


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _canonical_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


class _Stages:
    def __init__(self):
        self.times: list[tuple[str, float]] = []
        self._last = time.perf_counter()

    def mark(self, name: str) -> None:
        now = time.perf_counter()
        self.times.append((name, (now - self._last) * 1000.0))
        self._last = now

    def show(self) -> str:
        return "  ".join(f"{name}={ms:.2f}ms" for name, ms in self.times)


def _pipeline(network: Network, stages: _Stages):
    network = normalize_sinks(network)
    stages.mark("normalize")
    decomposition = basic_decomposition(network)
    stages.mark("decompose")
    graph = region_graph(decomposition)
    labeled = classify(graph, decomposition)
    feasible = feasibility(labeled)
    stages.mark("label")
    return network, decomposition, graph, labeled, feasible


def _region_summary(labeled) -> dict:
    counts = labeled.counts()
    return {
        "region_count": labeled.graph.n,
        "x1": counts["x1"],
        "x2": counts["x2"],
        "coding": counts["coding"],
        "singular": counts["singular"],
    }


def cmd_solve(args) -> int:
    stages = _Stages()
    network = load_instance_path(args.instance)
    stages.mark("load")
    network, decomposition, graph, labeled, feasible = _pipeline(network, stages)
    report = {
        "verdict": "solvable" if feasible else "unsolvable",
        "n_sinks": network.n_sinks,
        "regions": _region_summary(labeled),
        "singular_regions": [graph.heads[i] for i in labeled.singular_regions],
        "coding_regions": [graph.heads[i] for i in labeled.coding_regions],
        "minimized": bool(args.minimize),
        "field_order": None,
        "encoding_links": None,
        "bounds": {
            "encoding": max(3, 2 * network.n_sinks - 2),
            "coding": max(1, network.n_sinks - 2),
            "field": smallest_supported_order(
                field_size_bound(network.n_sinks)),
        },
        "oracle": None,
    }
    solution = None
    if feasible:
        if args.minimize:
            mdec, mgraph = minimize(labeled, seed=args.seed)
            mlabeled = classify(mgraph, mdec)
            stages.mark("minimize")
            coloring = chromatic_number(associated_graph(mlabeled))
            q = args.field or smallest_supported_order(max(2, coloring.chi - 1))
            code = code_from_coloring(mlabeled, coloring, make_field(q))
            solution = expand_solution(mdec, code)
            labeled_for_dot = mlabeled
        else:
            coding = len(labeled.coding_regions)
            q = args.field or smallest_supported_order(max(2, coding + 1))
            code = construct_code(labeled, make_field(q))
            solution = expand_solution(decomposition, code)
            labeled_for_dot = labeled
        stages.mark("construct")
        ok, verification = verify_solution(network, solution)
        stages.mark("verify")
        if not ok:
            print(f"internal error: constructed solution failed verification: "
                  f"{verification.first_failure}", file=sys.stderr)
            return 1
        report["field_order"] = solution.field.q
        report["encoding_links"] = len(solution.encoding_links)
        report["encoding_link_ids"] = sorted(solution.encoding_links)
    else:
        labeled_for_dot = labeled

    if args.oracle:
        oracle_solution = brute_force_solve(network)
        agrees = (oracle_solution is not None) == feasible
        report["oracle"] = "agree" if agrees else "disagree"
        if not agrees:
            print("oracle disagreement: exhaustive search contradicts the "
                  "region pipeline", file=sys.stderr)
            return 1

    print(f"verdict: {report['verdict']}")
    print(f"regions: {report['regions']}")
    if report["singular_regions"]:
        print(f"singular regions (heads): {report['singular_regions']}")
    if solution is not None:
        print(f"field order: {report['field_order']}")
        print(f"encoding links: {report['encoding_links']} "
              f"(bound {report['bounds']['encoding']})")
    if report["oracle"]:
        print(f"oracle: {report['oracle']}")
    print(f"timings: {stages.show()}")

    if args.json:
        _write(args.json, _canonical_json(report))
    if args.dot:
        _write(args.dot, dot.labeled_graph_dot(labeled_for_dot))
    if args.solution and solution is not None:
        _write(args.solution, solution_to_json(solution))
    return 0 if feasible else 2


def cmd_decompose(args) -> int:
    stages = _Stages()
    network = load_instance_path(args.instance)
    stages.mark("load")
    network, decomposition, graph, labeled, _ = _pipeline(network, stages)
    sys.stdout.write(decomposition.dump())
    print(f"timings: {stages.show()}")
    if args.dot:
        _write(args.dot, dot.region_graph_dot(decomposition, graph))
    if args.line_graph_dot:
        _write(args.line_graph_dot,
               dot.line_graph_dot(network, line_graph(network)))
    return 0


def _minimize_pipeline(args):
    stages = _Stages()
    network = load_instance_path(args.instance)
    stages.mark("load")
    network, decomposition, graph, labeled, feasible = _pipeline(network, stages)
    if not feasible:
        singular = [graph.heads[i] for i in labeled.singular_regions]
        print(f"verdict: unsolvable; singular regions (heads): {singular}")
        return 2, None, None, None, None, stages
    mdec, mgraph = minimize(labeled, seed=args.seed)
    mlabeled = classify(mgraph, mdec)
    stages.mark("minimize")
    coloring = chromatic_number(associated_graph(mlabeled))
    q = smallest_supported_order(max(2, coloring.chi - 1))
    code = code_from_coloring(mlabeled, coloring, make_field(q))
    solution = expand_solution(mdec, code)
    ok, verification = verify_solution(network, solution)
    if not ok:
        raise RegioncodeError(
            f"constructed solution failed verification: "
            f"{verification.first_failure}")
    stages.mark("construct")
    report = bounds_report(network, mlabeled, solution)
    stages.mark("audit")
    return 0, network, mlabeled, solution, report, stages


def cmd_minimize(args) -> int:
    code, network, mlabeled, solution, report, stages = _minimize_pipeline(args)
    if code:
        return code
    doc = report.to_document()
    doc["verdict"] = "solvable"
    doc["region_heads"] = list(mlabeled.graph.heads)
    print(f"minimal region graph: {mlabeled.graph.n} regions, "
          f"{len(mlabeled.graph.edges)} edges")
    print(f"coding regions: {report.n_coding} (bound {report.bound_coding})")
    print(f"encoding links: {report.encoding_link_count} "
          f"(bound {report.bound_encoding})")
    print(f"field order: {report.field_order_used} "
          f"(bound {report.field_bound})")
    print(f"audits: {'all passed' if report.all_passed else report.failed()}")
    print(f"timings: {stages.show()}")
    if args.json:
        _write(args.json, _canonical_json(doc))
    if args.dot:
        _write(args.dot, dot.labeled_graph_dot(mlabeled))
    return 0


def cmd_bounds(args) -> int:
    code, network, mlabeled, solution, report, stages = _minimize_pipeline(args)
    if code:
        return code
    doc = report.to_document()
    sys.stdout.write(_canonical_json(doc))
    if args.json:
        _write(args.json, _canonical_json(doc))
    return 0


def cmd_gen(args) -> int:
    if args.tight_encoding is not None and args.tight_field is not None:
        raise RegioncodeError(
            "choose one of --tight-encoding and --tight-field")
    if args.tight_encoding is not None:
        spec = gen_tight_encoding(args.tight_encoding)
    elif args.tight_field is not None:
        spec = gen_tight_field(args.tight_field)
    else:
        spec = None
    if spec is not None:
        text = spec.to_json() if args.emit_spec \
            else realize_network(spec).canonical_json()
    else:
        params = GenParams(node_count=args.nodes, link_count=args.links,
                           sinks1=args.sinks1, sinks2=args.sinks2,
                           seed=args.seed or 0)
        text = gen_random(params).canonical_json()
    if args.output:
        _write(args.output, text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args) -> int:
    network = load_instance_path(args.instance)
    network = normalize_sinks(network)
    doc = json.loads(Path(args.solution).read_text(encoding="utf-8"))
    solution = solution_from_document(network, doc)
    ok, report = verify_solution(network, solution)
    if ok:
        print(f"solution verified over GF({solution.field.q}); "
              f"{len(solution.encoding_links)} encoding links")
        return 0
    first = report.first_failure
    print(f"verification failed at link {first.link} "
          f"({first.condition}): {first.detail}")
    return 2


def _bench_instance(size: int, seed: int) -> Network:
    nodes = max(6, size // 3)
    return gen_random(GenParams(node_count=nodes, link_count=size,
                                sinks1=2, sinks2=2, seed=seed))


def _time_scan(network: Network, runs: int) -> float:
    in_ptr, in_links, sess = network.csr
    samples = []
    for _ in range(runs):
        t0 = time.perf_counter()
        _accel.solvability_scan(in_ptr, in_links, sess)
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples) * 1000.0


def cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",")]
    if sizes != sorted(sizes):
        raise RegioncodeError("sizes must be ascending")
    networks = [_bench_instance(s, args.seed or 0) for s in sizes]
    backends = [_accel.active_backend()]
    if args.compare and _accel.HAVE_NUMBA and backends != ["python"]:
        backends.append("python")
    print(f"decompose+label+feasibility, median of {args.runs} runs")
    print(f"{'links':>10}  " + "".join(f"{b + ' (ms)':>14}" for b in backends))
    rows = {b: [] for b in backends}
    for network in networks:
        cells = []
        for backend in backends:
            previous = os.environ.get(_accel.ENV_FLAG)
            if backend == "python":
                os.environ[_accel.ENV_FLAG] = "1"
            else:
                os.environ.pop(_accel.ENV_FLAG, None)
                _accel.warmup()
            try:
                ms = _time_scan(network, args.runs)
            finally:
                if previous is None:
                    os.environ.pop(_accel.ENV_FLAG, None)
                else:
                    os.environ[_accel.ENV_FLAG] = previous
            rows[backend].append(ms)
            cells.append(f"{ms:>14.3f}")
        print(f"{network.size:>10}  " + "".join(cells))
    for backend in backends:
        times = rows[backend]
        ratios = [times[i + 1] / times[i] for i in range(len(times) - 1)]
        shown = ", ".join(f"{r:.2f}" for r in ratios)
        print(f"{backend}: doubling ratios [{shown}]")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regioncode",
        description="Two-session multicast network coding: solvability, "
                    "code construction, and encoding-complexity bounds.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("instance", help="instance JSON file")
        p.add_argument("--json", help="write the canonical report here")
        p.add_argument("--dot", help="write a DOT rendering here")
        p.add_argument("--seed", type=int, default=None,
                       help="seed for the randomized minimization order")

    p = sub.add_parser("solve", help="decide solvability and build a solution")
    add_common(p)
    p.add_argument("--field", type=int, default=None,
                   help="force this field order")
    p.add_argument("--minimize", action="store_true",
                   help="reduce to a minimal region graph first")
    p.add_argument("--oracle", action="store_true",
                   help="cross-check with the exhaustive search")
    p.add_argument("--solution", help="write the solution file here")
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("decompose", help="print the canonical decomposition")
    add_common(p)
    p.add_argument("--line-graph-dot", help="write the line graph DOT here")
    p.set_defaults(fn=cmd_decompose)

    p = sub.add_parser("minimize", help="minimal region graph plus report")
    add_common(p)
    p.set_defaults(fn=cmd_minimize)

    p = sub.add_parser("bounds", help="emit the bounds report only")
    add_common(p)
    p.set_defaults(fn=cmd_bounds)

    p = sub.add_parser("gen", help="generate an instance file")
    p.add_argument("--nodes", type=int, default=10)
    p.add_argument("--links", type=int, default=15)
    p.add_argument("--sinks1", type=int, default=1)
    p.add_argument("--sinks2", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tight-encoding", type=int, default=None, metavar="N",
                   help="emit the encoding-bound-tight family instead")
    p.add_argument("--tight-field", type=int, default=None, metavar="N",
                   help="emit the field-bound-tight family instead")
    p.add_argument("--emit-spec", action="store_true",
                   help="write the region-graph spec rather than realizing it")
    p.add_argument("-o", "--output", help="output path (default stdout)")
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("verify", help="verify a solution file")
    p.add_argument("instance")
    p.add_argument("solution")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("bench", help="time the linear-time pipeline")
    p.add_argument("--sizes", default="10000,20000,40000,80000")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--runs", type=int, default=5)
    p.add_argument("--compare", action="store_true",
                   help="time both the numba and python backends")
    p.set_defaults(fn=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except RegioncodeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
