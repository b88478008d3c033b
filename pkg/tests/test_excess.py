import itertools
import random

import pytest

from edgebip.excess import (decompose_excess2, enumerate_compact_extensions,
                            excess, sigma_b_side)
from edgebip.reductions import reduce_exhaustively
from edgebip.relaxation import InstanceError, TermSepInstance, normalize
from util import build_graph, random_termsep


def oracle_compact_candidates(inst, r, side):
    """All terminal-free compact extensions of excess at most r, by subset
    enumeration."""
    g = inst.g
    base = inst.a0 if side == "A" else inst.b0
    other = inst.b0 if side == "A" else inst.a0
    free = sorted(g.vertex_set() - base - other - inst.terminals())
    d_base = g.cut_size(base)
    out = []
    for size in range(1, len(free) + 1):
        for extra in itertools.combinations(free, size):
            extra = set(extra)
            if base and g.edges_between(extra, base) == 0:
                continue
            if not base:
                continue
            if not _connected(g, extra):
                continue
            full = base | extra
            if g.cut_size(full) - d_base <= r:
                out.append(frozenset(full))
    return out


def _connected(g, xs):
    xs = set(xs)
    start = min(xs)
    seen = {start}
    queue = [start]
    while queue:
        v = queue.pop()
        for u in g.neighbors(v):
            if u in xs and u not in seen:
                seen.add(u)
                queue.append(u)
    return seen == xs


def oracle_maximal_compact(inst, r, side):
    cands = oracle_compact_candidates(inst, r, side)
    keys = set(cands)
    return {a for a in keys if not any(a < b for b in keys)}


def test_excess_examples():
    g = build_graph(5, [(1, 2), (2, 3), (3, 4), (4, 5)])
    inst = TermSepInstance(g, [], a0={1}, b0={5}, k=5)
    assert excess(inst, {1}, "A") == 0
    assert excess(inst, {1, 2}, "A") == 0
    assert excess(inst, {1, 2, 3}, "A") == 0
    assert excess(inst, {5, 4}, "B") == 0
    with pytest.raises(InstanceError):
        excess(inst, {2}, "A")          # does not contain the base
    with pytest.raises(InstanceError):
        excess(inst, {1, 5}, "A")       # touches the other side


def test_excess_matches_cut_recount():
    rng = random.Random(31)
    for _ in range(60):
        inst = random_termsep(rng, n=rng.randrange(2, 7), m=rng.randrange(1, 10),
                              npairs=rng.randrange(0, 3), k=8, seed_fraction=0.5)
        g = inst.g
        free = sorted(g.vertex_set() - inst.a0 - inst.b0)
        extra = {v for v in free if rng.random() < 0.4}
        full = inst.a0 | extra
        assert excess(inst, full, "A") == g.cut_size(full) - g.cut_size(inst.a0)


def test_enumeration_empty_without_structure():
    # a lone pair across an edge path: after normalization nothing free has
    # low excess on either side
    g = build_graph(4, [(1, 3), (2, 4), (3, 4), (3, 4)])
    inst = TermSepInstance(g, [(1, 2)], a0=set(), b0=set(), k=5)
    normalize(inst)
    assert enumerate_compact_extensions(inst, 1, "A") == []


def test_planted_singleton_listed():
    # vertex 3: two edges to the A side and three into a triangle whose
    # corners each touch the B side; the odd structure keeps everything
    # undecided at minimum cost, so the excess-1 singleton {3} survives
    g = build_graph(6, [(1, 3), (1, 3), (3, 4), (3, 5), (3, 6),
                        (4, 5), (5, 6), (4, 6), (4, 2), (5, 2), (6, 2)])
    inst = TermSepInstance(g, [], a0={1}, b0={2}, k=9)
    normalize(inst)
    assert inst.a0 == {1} and inst.b0 == {2}
    found = enumerate_compact_extensions(inst, 1, "A")
    assert [set(ce.vertices) for ce in found] == [{1, 3}]
    assert found[0].excess == 1
    assert oracle_maximal_compact(inst, 1, "A") == {frozenset({1, 3})}


def test_enumeration_matches_oracle_family():
    rng = random.Random(33)
    checked = 0
    for _ in range(140):
        inst = random_termsep(rng, n=rng.randrange(2, 7), m=rng.randrange(1, 11),
                              npairs=rng.randrange(0, 3), k=10, seed_fraction=0.5)
        if not inst.a0 and not inst.b0:
            continue
        normalize(inst)
        for side in ("A", "B"):
            for r in (1, 2):
                got = {frozenset(ce.vertices)
                       for ce in enumerate_compact_extensions(inst, r, side)}
                want = oracle_maximal_compact(inst, r, side)
                assert got == want, (side, r, sorted(map(sorted, got)),
                                     sorted(map(sorted, want)))
                checked += 1
    assert checked > 100


def _reduced_instances(seed, count, **kw):
    rng = random.Random(seed)
    made = 0
    while made < count:
        inst = random_termsep(rng, n=rng.randrange(3, 8), m=rng.randrange(2, 12),
                              npairs=rng.randrange(1, 3), k=rng.randrange(2, 6), **kw)
        res = reduce_exhaustively(inst)
        if res.outcome != "reduced":
            continue
        made += 1
        yield inst


def test_decomposition_invariants_on_reduced_instances():
    seen = 0
    for inst in _reduced_instances(35, 60, seed_fraction=0.4):
        g = inst.g
        for side in ("A", "B"):
            base = inst.a0 if side == "A" else inst.b0
            other = inst.b0 if side == "A" else inst.a0
            for ce in enumerate_compact_extensions(inst, 2, side):
                if ce.excess != 2:
                    continue
                dec = decompose_excess2(inst, ce.vertices, side)
                seen += 1
                extra = set(ce.vertices) - base
                parts = set(dec.c_vertices) | ({dec.d_vertex} if dec.d_vertex is not None else set())
                assert parts == extra
                for i, ci in enumerate(dec.c_vertices):
                    assert excess(inst, base | {ci}, side) == 1
                    outside = g.vertex_set() - set(ce.vertices) - other
                    assert g.edges_between({ci}, outside) == dec.x[i] + 1
                    assert g.edges_between({ci}, base) == dec.p[i] + dec.x[i]
                if dec.d_vertex is not None:
                    assert excess(inst, base | {dec.d_vertex}, side) > 1
                    sigma, case = sigma_b_side(inst, dec)
                    assert sigma >= 1
                    if sigma == 1:
                        assert case in (1, 2)
    assert seen >= 5


def test_nested_excess2_only_maximal_listed():
    for inst in _reduced_instances(37, 40, seed_fraction=0.4):
        for side in ("A", "B"):
            got = [frozenset(ce.vertices)
                   for ce in enumerate_compact_extensions(inst, 2, side)]
            for a in got:
                for b in got:
                    assert not a < b


def test_sigma_cases():
    # lone heavy vertex of degree 4: one base edge, three leaving
    g = build_graph(8, [(1, 2), (1, 2), (1, 2), (3, 1), (3, 5), (3, 6), (3, 7)])
    inst = TermSepInstance(g, [], a0={1}, b0={2}, k=9)
    dec = decompose_excess2(inst, {1, 3}, "A")
    assert dec.d_vertex == 3 and dec.c_vertices == []
    sigma, case = sigma_b_side(inst, dec)
    assert sigma == 1 and case == 1

    # heavy vertex of degree 3 plus one balanced singleton
    g2 = build_graph(9, [(1, 2), (1, 2), (1, 2), (4, 1), (4, 1), (4, 3), (4, 5),
                         (4, 8), (3, 6), (3, 7)])
    inst2 = TermSepInstance(g2, [], a0={1}, b0={2}, k=9)
    dec2 = decompose_excess2(inst2, {1, 3, 4}, "A")
    assert dec2.d_vertex == 3 and dec2.c_vertices == [4]
    assert dec2.p == [1] and dec2.x == [1]
    sigma2, case2 = sigma_b_side(inst2, dec2)
    assert sigma2 == 1 and case2 == 2

    # generic sigma count
    assert dec2.sigma == inst2.g.edges_between({3}, {1}) + sum(dec2.p)


def test_decompose_rejects_wrong_excess():
    g = build_graph(3, [(1, 2), (1, 3)])
    inst = TermSepInstance(g, [], a0={1}, b0={2}, k=5)
    with pytest.raises(InstanceError):
        decompose_excess2(inst, {1, 3}, "A")
