import json
import random

import pytest

import regioncode as rc
from conftest import BOTTLENECK_DOC, BUTTERFLY_DOC, TWO_CHAINS_DOC, load
from regioncode.errors import (
    CycleDetectedError,
    DanglingLinkError,
    MalformedInputError,
    MissingSourceError,
    NoSinksError,
)


def test_butterfly_loads_with_imaginary_links(butterfly):
    assert butterfly.size == 11
    assert butterfly.n_real_links == 7
    assert butterfly.n_sinks == 2
    assert butterfly.link(1).head == "s1" and butterfly.link(1).tail is None
    assert butterfly.link(2).head == "s2"
    # sink links come last: first session 1 (at t2), then session 2 (at t1)
    assert butterfly.link(10).tail == "t2" and butterfly.link(10).head is None
    assert butterfly.link(11).tail == "t1"
    assert butterfly.session_of_sink_link == {10: 1, 11: 2}


def test_butterfly_canonical_index(butterfly):
    by_ends = {(ln.tail, ln.head): ln.id for ln in butterfly.links}
    assert by_ends[("s1", "a")] == 3
    assert by_ends[("s1", "t1")] == 4
    assert by_ends[("s2", "a")] == 5
    assert by_ends[("s2", "t2")] == 6
    assert by_ends[("a", "b")] == 7
    assert by_ends[("b", "t1")] == 8
    assert by_ends[("b", "t2")] == 9


def test_in_sets(butterfly):
    assert butterfly.in_sets == (
        (), (), (1,), (1,), (2,), (2,), (3, 5), (7,), (7,), (6, 9), (4, 8))


def test_index_links_is_identity_and_topological(butterfly):
    order = rc.index_links(butterfly)
    assert order == tuple(range(1, 12))
    position = {l: i for i, l in enumerate(order)}
    for link_id in order:
        for u in butterfly.in_set(link_id):
            assert position[u] < position[link_id]
    assert rc.index_links(butterfly) == order


def test_two_chains_path_order(two_chains):
    ends = [(ln.tail, ln.head) for ln in two_chains.links]
    assert ends == [(None, "s1"), (None, "s2"), ("s1", "t"), ("s2", "u"),
                    ("t", None), ("u", None)]


def test_loading_is_deterministic():
    a = load(BUTTERFLY_DOC)
    b = load(BUTTERFLY_DOC)
    assert a.canonical_json() == b.canonical_json()
    assert a == b
    again = rc.load_network(a.canonical_json())
    assert again.canonical_json() == a.canonical_json()


def test_zero_real_links_rejected():
    doc = dict(TWO_CHAINS_DOC, links=[])
    with pytest.raises((MissingSourceError, NoSinksError)):
        load(doc)


def test_two_cycle_rejected():
    doc = {
        "nodes": ["s1", "s2", "a", "b", "t", "u"],
        "links": [{"tail": "s1", "head": "a"}, {"tail": "a", "head": "b"},
                  {"tail": "b", "head": "a"}, {"tail": "s2", "head": "u"},
                  {"tail": "a", "head": "t"}],
        "source1": "s1", "source2": "s2",
        "sinks1": ["t"], "sinks2": ["u"],
    }
    with pytest.raises(CycleDetectedError):
        load(doc)


def test_dangling_link_rejected():
    doc = {
        "nodes": ["s1", "s2", "ghost", "t", "u"],
        "links": [{"tail": "s1", "head": "t"}, {"tail": "s2", "head": "u"},
                  {"tail": "ghost", "head": "t"}],
        "source1": "s1", "source2": "s2",
        "sinks1": ["t"], "sinks2": ["u"],
    }
    with pytest.raises(DanglingLinkError):
        load(doc)


def test_sink_without_feed_rejected():
    doc = {
        "nodes": ["s1", "s2", "t", "u", "lonely"],
        "links": [{"tail": "s1", "head": "t"}, {"tail": "s2", "head": "u"}],
        "source1": "s1", "source2": "s2",
        "sinks1": ["t", "lonely"], "sinks2": ["u"],
    }
    with pytest.raises(DanglingLinkError):
        load(doc)


def test_missing_source_rejected():
    doc = dict(TWO_CHAINS_DOC, source1="nowhere")
    with pytest.raises(MissingSourceError):
        load(doc)


def test_empty_sinks_rejected():
    doc = dict(TWO_CHAINS_DOC, sinks2=[])
    with pytest.raises(NoSinksError):
        load(doc)


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("nodes"),
    lambda d: d.update(extra=1),
    lambda d: d.update(nodes=["s1", "s1", "s2", "t", "u"]),
    lambda d: d.update(links=[{"tail": "s1"}]),
    lambda d: d.update(links=[{"tail": "s1", "head": "zzz"}]),
    lambda d: d.update(sinks1=["zzz"]),
    lambda d: d.update(sinks1="t"),
])
def test_malformed_documents_rejected(mutate):
    doc = json.loads(json.dumps(TWO_CHAINS_DOC))
    mutate(doc)
    with pytest.raises(MalformedInputError):
        load(doc)


def test_invalid_json_rejected():
    with pytest.raises(MalformedInputError):
        rc.load_network("{not json")


def test_fan_in_limit():
    with pytest.raises(MalformedInputError):
        load_with_fan_in_one()


def load_with_fan_in_one():
    return rc.load_network(json.dumps(BUTTERFLY_DOC), max_fan_in=1)


def test_normalize_disjoint_is_identity(butterfly):
    assert rc.normalize_sinks(butterfly) is butterfly


def test_normalize_single_shared_sink():
    doc = {
        "nodes": ["s1", "s2", "v", "t"],
        "links": [{"tail": "s1", "head": "v"}, {"tail": "s2", "head": "v"},
                  {"tail": "v", "head": "t"}],
        "source1": "s1", "source2": "s2",
        "sinks1": ["t"], "sinks2": ["t"],
    }
    net = load(doc)
    norm = rc.normalize_sinks(net)
    assert len(norm.node_names) == len(net.node_names) + 2
    assert norm.n_real_links == net.n_real_links + 2
    assert norm.sinks1 == ("t__x1",) and norm.sinks2 == ("t__x2",)
    assert norm.sinks_are_disjoint()
    assert norm.n_sinks == 2


def test_normalize_both_demands_butterfly():
    doc = json.loads(json.dumps(BUTTERFLY_DOC))
    doc["sinks1"] = ["t1", "t2"]
    doc["sinks2"] = ["t1", "t2"]
    net = load(doc)
    norm = rc.normalize_sinks(net)
    assert norm.n_sinks == 4
    assert len(norm.node_names) == len(net.node_names) + 4
    assert norm.n_real_links == net.n_real_links + 4
    # the classic shared-demand butterfly stays solvable after the split
    ok, _ = rc.solvable(norm)
    assert ok
    assert rc.brute_force_solve(norm) is not None


def test_normalize_preserves_pipeline_verdict():
    rng = random.Random(5)
    for seed in range(30):
        params = rc.GenParams(node_count=7 + seed % 4, link_count=9 + seed % 6,
                              sinks1=1, sinks2=1, seed=seed)
        net = rc.gen_random(params)
        verdict, _ = rc.solvable(net)
        verdict_after, _ = rc.solvable(rc.normalize_sinks(net))
        assert verdict == verdict_after


def test_random_link_order_is_valid(butterfly):
    rng = random.Random(1)
    for _ in range(10):
        order = rc.random_link_order(butterfly, rng)
        assert order[:2] == (1, 2)
        position = {l: i for i, l in enumerate(order)}
        for link_id in order:
            for u in butterfly.in_set(link_id):
                assert position[u] < position[link_id]
