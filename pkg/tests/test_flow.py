import random

import pytest

from edgebip.flow import EXCEEDED, FlowNetwork, FlowStateError, min_cut
from util import build_graph, brute_force_min_cut, cycle, random_multigraph


def test_single_edge():
    g = build_graph(2, [(1, 2)])
    value, net = min_cut(g, {1}, {2}, r_max=5)
    assert value == 1
    assert net.source_side("min") == {1}
    assert net.source_side("max") == {1}


def test_two_disjoint_paths_exceeded():
    g = build_graph(4, [(1, 3), (3, 2), (1, 4), (4, 2)])
    value, net = min_cut(g, {1}, {2}, r_max=1)
    assert value is EXCEEDED
    with pytest.raises(FlowStateError):
        net.source_side("min")


def test_c4_opposite_corners():
    value, _ = min_cut(cycle(4), {1}, {3}, r_max=5)
    assert value == 2


def test_path_min_max_sides():
    g = build_graph(3, [(1, 2), (2, 3)])
    value, net = min_cut(g, {1}, {3})
    assert value == 1
    assert net.source_side("min") == {1}
    assert net.source_side("max") == {1, 2}


def test_pendant_joins_both_sides():
    g = build_graph(3, [(1, 2), (1, 2), (1, 3)])
    value, net = min_cut(g, {1}, {2})
    assert value == 2
    assert 3 in net.source_side("min")
    assert 3 in net.source_side("max")


def test_probe_before_flow_rejected():
    g = build_graph(2, [(1, 2)])
    net = min_cut(g, {1}, {2}, r_max=0)[1]
    with pytest.raises(FlowStateError):
        net.probe_pins([1], [])


def test_conflicting_pin_rejected():
    g = build_graph(3, [(1, 2), (2, 3)])
    value, net = min_cut(g, {1}, {3})
    assert value == 1
    with pytest.raises(FlowStateError):
        net.probe_pins([3], [])


def test_probe_commit_and_rollback():
    g = build_graph(3, [(1, 2), (1, 2), (2, 3)])
    value, net = min_cut(g, {1}, {3})
    assert value == 1
    # pinning 2 to the source keeps the cut at the 2-3 edge
    assert net.probe_pins([2], [], commit=False)
    # pinning 2 to the sink forces both parallel edges: cut grows
    assert not net.probe_pins([], [2])
    assert net.max_flow() == 1  # rolled back network unchanged


def test_matches_brute_force_and_extremal_sides():
    rng = random.Random(5)
    for _ in range(80):
        n = rng.randrange(2, 8)
        g = random_multigraph(rng, n, rng.randrange(1, 14))
        vs = sorted(g.vertices())
        src = {vs[0]}
        snk = {vs[-1]} if vs[-1] not in src else {vs[0]}
        if src == snk:
            continue
        best, sides = brute_force_min_cut(g, src, snk)
        value, net = min_cut(g, src, snk)
        assert value == best
        lo = net.source_side("min")
        hi = net.source_side("max")
        assert g.cut_size(lo) == value
        assert g.cut_size(hi) == value
        assert lo <= hi
        for side in sides:
            assert lo <= side <= hi


def test_multiplicity_counts_as_parallel_arcs():
    g = build_graph(2, [(1, 2), (1, 2), (1, 2)])
    value, _ = min_cut(g, {1}, {2})
    assert value == 3


def test_round_bound_boundary():
    g = build_graph(2, [(1, 2), (1, 2)])
    value, _ = min_cut(g, {1}, {2}, r_max=2)
    assert value == 2
    value, _ = min_cut(g, {1}, {2}, r_max=1)
    assert value is EXCEEDED
