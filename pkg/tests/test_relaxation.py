import random

import pytest

from edgebip.multigraph import MultiGraph
from edgebip.pipeline import LabelingOracle
from edgebip.relaxation import (InstanceError, RelaxationSolver, TermSepInstance,
                                TerminalSeparation, min_cost_extension, normalize,
                                probe_branch)
from util import build_graph, random_termsep


def make_instance(n, edges, pairs, a0=(), b0=(), k=10):
    g = build_graph(n, edges)
    return TermSepInstance(g, pairs, a0=a0, b0=b0, k=k)


def test_validation_rejects_bad_instances():
    with pytest.raises(InstanceError):
        make_instance(3, [(1, 2), (1, 3)], [(1, 2)])  # terminal of degree 2
    with pytest.raises(InstanceError):
        make_instance(4, [], [(1, 2), (2, 3)])        # overlapping pairs
    with pytest.raises(InstanceError):
        make_instance(2, [], [(1, 2)], a0={1}, b0={1})
    with pytest.raises(InstanceError):
        make_instance(2, [], [(1, 2)], a0={1, 2})     # pair on one side


def test_integral_seed_returned_unchanged():
    inst = make_instance(2, [(1, 2)], [], a0={1}, b0={2})
    sep = min_cost_extension(inst, inst.a0, inst.b0)
    assert sep.a == {1} and sep.b == {2}
    assert sep.cost2(inst.g) == 2


def test_shared_neighbor_pair_stays_open():
    # s=1 and t=2 both hang off 3: resolving the pair always costs, so the
    # minimum-cost extension leaves everything undecided
    inst = make_instance(3, [(1, 3), (2, 3)], [(1, 2)])
    sep = min_cost_extension(inst, set(), set())
    assert sep.a == set() and sep.b == set()
    oracle = LabelingOracle(inst)
    assert oracle.relaxed_min_cost2() == 0
    # and every resolving labeling costs at least 1 (doubled: 2)
    resolving = oracle.cost2[oracle.labels[:, 0] != 0]
    assert int(resolving.min()) == 2


def test_seeded_pair_completes_at_cost_one():
    # s=1-3, t=2-4, edge 3-4: fixing s left and t right costs exactly one edge
    inst = make_instance(4, [(1, 3), (2, 4), (3, 4)], [(1, 2)])
    solver = RelaxationSolver(inst, {1}, {2})
    sep = solver.maximal_separation()
    assert solver.cost2 == 2
    assert sep.is_integral(inst.g)
    assert sep.cost2(inst.g) == 2


def rnd_cases(count, seed, **kw):
    rng = random.Random(seed)
    for _ in range(count):
        yield rng, random_termsep(
            rng, n=rng.randrange(0, 6), m=rng.randrange(0, 8),
            npairs=rng.randrange(0, 3), k=8, **kw)


def test_minimality_against_enumeration():
    for rng, inst in rnd_cases(120, 21):
        solver = RelaxationSolver(inst, inst.a0, inst.b0)
        oracle = LabelingOracle(inst)
        assert solver.cost2 == oracle.relaxed_min_cost2()
        sep = solver.maximal_separation()
        assert sep.cost2(inst.g) == solver.cost2


def test_maximality_against_enumeration():
    for rng, inst in rnd_cases(80, 22):
        sep = min_cost_extension(inst, inst.a0, inst.b0)
        oracle = LabelingOracle(inst)
        mask = oracle.proper_extensions_mask(sep)
        if mask.any():
            assert int(oracle.cost2[mask].min()) > sep.cost2(inst.g)


def test_persistence_against_enumeration():
    for rng, inst in rnd_cases(120, 23):
        sep = min_cost_extension(inst, inst.a0, inst.b0)
        oracle = LabelingOracle(inst)
        assert oracle.some_optimal_integral_extends(sep)


def test_normalize_monotone_and_idempotent():
    for rng, inst in rnd_cases(60, 24, seed_fraction=0.4):
        normalize(inst)  # reach a maximal state first
        cost2 = inst.cost2()
        resolved = {p for p in inst.pairs if p[0] in inst.a0 | inst.b0}
        a1, b1 = set(inst.a0), set(inst.b0)
        again = normalize(inst)
        assert again == cost2
        assert inst.a0 == a1 and inst.b0 == b1
        assert {p for p in inst.pairs if p[0] in inst.a0 | inst.b0} == resolved


def test_normalize_absorbs_free_pendant():
    # vertex 3 hangs off the A side only: a maximal extension must take it
    inst = make_instance(4, [(1, 3), (2, 4), (3, 4)], [], a0={1}, b0={2}, k=9)
    normalize(inst)
    assert 3 in inst.a0


def test_immediate_boundary_count_formula():
    # one direct boundary edge, one undecided vertex with two edges to the A
    # side and one to the B side
    from edgebip.relaxation import immediate_boundary_count
    g = build_graph(5, [(1, 2), (3, 1), (3, 1), (3, 2), (4, 1), (5, 2)])
    assert immediate_boundary_count(g, {1, 4}, {2, 5}) == 1 + min(2, 1)
    assert immediate_boundary_count(g, {4}, {5}) == 0
    # direct edges only
    assert immediate_boundary_count(build_graph(2, [(1, 2)]), {1}, {2}) == 1


def test_probe_rho_matches_independent_recount():
    from edgebip.relaxation import immediate_boundary_count
    for rng, inst in rnd_cases(60, 26, seed_fraction=0.3):
        report = probe_branch(inst, inst.a0, inst.b0)
        sep = min_cost_extension(inst, inst.a0, inst.b0)
        expected = len(inst.g.boundary_edges(sep.a, sep.b))
        for v in inst.g.vertex_set() - sep.assigned():
            expected += min(inst.g.edges_between({v}, sep.a),
                            inst.g.edges_between({v}, sep.b))
        assert report.rho == expected
        assert report.rho == immediate_boundary_count(inst.g, sep.a, sep.b)


def test_probe_is_read_only_and_counts_resolution():
    inst = make_instance(4, [(1, 3), (2, 4), (3, 4)], [(1, 2)])
    a_before, b_before = set(inst.a0), set(inst.b0)
    report = probe_branch(inst, {1}, {2})
    assert inst.a0 == a_before and inst.b0 == b_before
    assert report.resolved == 1
    assert report.cost_delta2 == 2
    # after the extension the instance is integral: no boundary vertices left,
    # one cut edge
    assert report.rho == 1


def test_probe_pair_with_no_boundary_contact():
    inst = make_instance(4, [(1, 3), (2, 4)], [(1, 2)])
    report = probe_branch(inst, {1}, {2})
    assert report.resolved == 1
    assert report.rho == 0


def test_extension_respects_seed_discipline():
    inst = make_instance(4, [(1, 3), (2, 4), (3, 4)], [(1, 2)])
    with pytest.raises(InstanceError):
        min_cost_extension(inst, {1, 2}, set())
    with pytest.raises(InstanceError):
        min_cost_extension(inst, {1}, {3, 1})


def test_cost_equals_flow_on_random_seeds():
    for rng, inst in rnd_cases(80, 25, seed_fraction=0.3):
        solver = RelaxationSolver(inst, inst.a0, inst.b0)
        sep = solver.maximal_separation()
        assert sep.cost2(inst.g) == solver.cost2
        oracle = LabelingOracle(inst)
        assert solver.cost2 == oracle.relaxed_min_cost2()
