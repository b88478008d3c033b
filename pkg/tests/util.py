"""Shared generators and brute-force helpers for the test suite."""

from __future__ import annotations

import itertools
import random

from edgebip.multigraph import MultiGraph
from edgebip.relaxation import TermSepInstance


def build_graph(n, edges) -> MultiGraph:
    g = MultiGraph()
    for v in range(1, n + 1):
        g.add_vertex(v)
    for (u, v) in edges:
        g.add_edge(u, v)
    return g


def cycle(n: int) -> MultiGraph:
    return build_graph(n, [(i, i % n + 1) for i in range(1, n + 1)])


def complete(n: int) -> MultiGraph:
    return build_graph(n, [(u, v) for u in range(1, n + 1)
                           for v in range(u + 1, n + 1)])


def random_multigraph(rng: random.Random, n: int, m: int) -> MultiGraph:
    g = MultiGraph()
    for v in range(1, n + 1):
        g.add_vertex(v)
    if n < 2:
        m = 0
    for _ in range(m):
        u = rng.randrange(1, n + 1)
        v = rng.randrange(1, n + 1)
        while v == u:
            v = rng.randrange(1, n + 1)
        g.add_edge(u, v)
    return g


def random_termsep(rng: random.Random, n: int, m: int, npairs: int, k: int,
                   seed_fraction: float = 0.0) -> TermSepInstance:
    """Random instance: a core graph plus degree-1 terminal pairs hanging off
    random core vertices, with an optional random consistent preassignment."""
    g = random_multigraph(rng, n, m)
    pairs = []
    next_v = n + 1
    for _ in range(npairs):
        s, t = next_v, next_v + 1
        next_v += 2
        g.add_vertex(s)
        g.add_vertex(t)
        if n > 0 and rng.random() < 0.9:
            g.add_edge(s, rng.randrange(1, n + 1))
        if n > 0 and rng.random() < 0.9:
            g.add_edge(t, rng.randrange(1, n + 1))
        pairs.append((s, t))
    a0, b0 = set(), set()
    for v in range(1, n + 1):
        r = rng.random()
        if r < seed_fraction / 2:
            a0.add(v)
        elif r < seed_fraction:
            b0.add(v)
    for (s, t) in pairs:
        if rng.random() < seed_fraction:
            if rng.random() < 0.5:
                a0.add(s)
                b0.add(t)
            else:
                a0.add(t)
                b0.add(s)
    return TermSepInstance(g, pairs, a0=a0, b0=b0, k=k)


def brute_force_min_cut(g: MultiGraph, sources, sinks):
    """Minimum cut value by enumerating every source-side vertex set."""
    sources, sinks = set(sources), set(sinks)
    rest = sorted(g.vertex_set() - sources - sinks)
    best = None
    best_sides = []
    for size in range(len(rest) + 1):
        for extra in itertools.combinations(rest, size):
            side = sources | set(extra)
            value = g.cut_size(side)
            if best is None or value < best:
                best = value
                best_sides = [side]
            elif value == best:
                best_sides.append(side)
    return best, best_sides


def brute_force_bipartization(g: MultiGraph) -> int:
    """Minimum deletions over all 2-colorings; independent of the package's
    own oracle implementation."""
    vs = sorted(g.vertices())
    if not vs:
        return 0
    best = None
    for mask in range(1 << (len(vs) - 1)):
        color = {v: (mask >> i) & 1 for i, v in enumerate(vs[:-1])}
        color[vs[-1]] = 0
        bad = sum(1 for e in g.edges() if color[e.u] == color[e.v])
        best = bad if best is None else min(best, bad)
    return best
