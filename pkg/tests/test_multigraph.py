import random

import pytest

from edgebip.multigraph import GraphError, MultiGraph, parse_graph, render_graph
from util import build_graph, cycle, random_multigraph


def test_cut_size_triangle_vertex():
    g = build_graph(3, [(1, 2), (2, 3), (1, 3)])
    assert g.cut_size({1}) == 2


def test_cut_size_empty_set():
    g = cycle(4)
    assert g.cut_size(set()) == 0


def test_cut_size_c4_pair():
    # count the edges leaving {1,2} of the 4-cycle by hand: 4-1 and 2-3
    g = cycle(4)
    assert g.cut_size({1, 2}) == 2


def test_cut_size_unknown_vertex():
    g = cycle(4)
    with pytest.raises(GraphError):
        g.cut_size({99})


def test_edges_between_examples():
    g = cycle(4)
    assert g.edges_between({1}, {3}) == 0
    assert g.edges_between({1}, {2, 4}) == 2
    doubled = build_graph(2, [(1, 2), (1, 2)])
    assert doubled.edges_between({1}, {2}) == 2
    with pytest.raises(GraphError):
        g.edges_between({1, 2}, {2, 3})


def test_merge_triangle():
    g = build_graph(3, [(1, 2), (2, 3), (1, 3)])
    z = g.merge_set({1, 2})
    assert g.n == 2
    assert g.multiplicity(z, 3) == 2          # boundary doubled
    assert g.m == 2                            # internal edge became a loop: gone


def test_merge_singleton_relabels_only():
    g = cycle(4)
    edges_before = sorted((min(e.u, e.v), max(e.u, e.v)) for e in g.edges())
    z = g.merge_set({1})
    mapped = sorted((min(z if a == 1 else a, z if b == 1 else b),
                     max(z if a == 1 else a, z if b == 1 else b))
                    for a, b in edges_before)
    edges_after = sorted((min(e.u, e.v), max(e.u, e.v)) for e in g.edges())
    assert edges_after == mapped
    assert g.m == 4


def test_merge_c4_opposite():
    g = cycle(4)
    z = g.merge_set({1, 3})
    assert g.n == 3
    assert g.degree(z) == 4


def test_merge_empty_rejected():
    with pytest.raises(GraphError):
        cycle(3).merge_set(set())


def test_merge_tracks_classes():
    g = cycle(5)
    z1 = g.merge_set({1, 2})
    z2 = g.merge_set({z1, 3})
    assert g.find_merged(1) == z2
    assert g.find_merged(3) == z2
    assert g.find_merged(4) == 4


def test_mutators():
    g = build_graph(2, [(1, 2), (1, 2)])
    eid = g.edge_ids_between(1, 2)[0]
    g.delete_edge(eid)
    assert g.multiplicity(1, 2) == 1

    g2 = build_graph(3, [(1, 2)])
    g2.delete_vertices({3})
    assert g2.n == 2 and g2.m == 1

    g3 = cycle(4)
    snapshot = sorted((e.u, e.v) for e in g3.edges())
    e = g3.add_edge(1, 3)
    g3.delete_edge(e.eid)
    assert sorted((e.u, e.v) for e in g3.edges()) == snapshot

    with pytest.raises(GraphError):
        g3.delete_edge(9999)
    with pytest.raises(GraphError):
        g3.add_edge(1, 1)


def test_restore_edge_round_trip():
    g = cycle(4)
    e = g.edge(2)
    g.delete_edge(2)
    g.restore_edge(e)
    assert g.multiplicity(e.u, e.v) == 1
    with pytest.raises(GraphError):
        g.restore_edge(e)


def test_cut_identities_exact():
    rng = random.Random(7)
    for _ in range(60):
        g = random_multigraph(rng, rng.randrange(2, 9), rng.randrange(0, 14))
        vs = sorted(g.vertices())
        for _ in range(20):
            a = {v for v in vs if rng.random() < 0.5}
            b = {v for v in vs if rng.random() < 0.5}
            da, db = g.cut_size(a), g.cut_size(b)
            lhs = da + db
            assert lhs == (g.cut_size(a & b) + g.cut_size(a | b)
                           + 2 * g.edges_between(a - b, b - a))
            rest = set(vs) - (a | b)
            cross = g.edges_between(a & b, rest) if (a & b) and rest else 0
            assert lhs == g.cut_size(a - b) + g.cut_size(b - a) + 2 * cross
            assert da == g.cut_size(set(vs) - a)


def test_merge_preimage_cut_equality():
    rng = random.Random(11)
    for _ in range(40):
        g = random_multigraph(rng, rng.randrange(3, 8), rng.randrange(2, 12))
        vs = sorted(g.vertices())
        x = set(rng.sample(vs, rng.randrange(1, len(vs))))
        pre = g.copy()
        z = g.merge_set(x)
        others = [v for v in vs if v not in x]
        # side not containing the merged vertex: untouched edges
        s = {v for v in others if rng.random() < 0.5}
        assert g.cut_size(s) == pre.cut_size(s)
        # side containing it: compare against the preimage expansion
        s_z = s | {z}
        assert g.cut_size(s_z) == pre.cut_size(s | x)


def test_format_round_trip():
    rng = random.Random(3)
    for _ in range(20):
        g = random_multigraph(rng, rng.randrange(1, 8), rng.randrange(0, 12))
        text = render_graph(g)
        h = parse_graph(text)
        assert h.n == g.n and h.m == g.m
        assert render_graph(h) == text


def test_parse_rejects_malformed():
    with pytest.raises(GraphError):
        parse_graph("e 1 2\n")
    with pytest.raises(GraphError):
        parse_graph("p edge 2 1\ne 1 3\n")
    with pytest.raises(GraphError):
        parse_graph("p edge 2 2\ne 1 2\n")
    with pytest.raises(GraphError):
        parse_graph("p edge 2 1\nq 1 2\ne 1 2\n")
    g = parse_graph("c comment\np edge 3 2\ne 1 2\ne 2 3\n")
    assert g.n == 3 and g.m == 2


def test_terminal_merge_guard():
    g = build_graph(4, [(1, 2), (3, 4)])
    g.terminal_mark[1] = 0
    g.terminal_mark[3] = 1
    with pytest.raises(GraphError):
        g.merge_set({1, 3})
    z = g.merge_set({1, 2})
    assert g.terminal_mark[z] == 0
