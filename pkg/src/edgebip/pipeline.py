"""End-to-end edge bipartization: iterative compression, the reduction to
terminal separation with solution lifting, an exhaustive orientation
baseline, and brute-force oracles used for verification."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from . import branching
from .flow import EXCEEDED, min_cut
from .multigraph import Edge, GraphError, MultiGraph, resolve_input_edge
from .relaxation import InstanceError, TermSepInstance, TerminalSeparation


class GuardError(RuntimeError):
    """An oracle or baseline was asked to exceed its size guard."""


# -- bipartiteness ----------------------------------------------------------

def color_bipartite(g: MultiGraph, ignore_edges: Iterable[int] = ()) -> Optional[dict[int, int]]:
    """BFS 2-coloring of the graph minus the given edge ids, or None if some
    component is odd."""
    ignore = set(ignore_edges)
    color: dict[int, int] = {}
    for start in sorted(g.vertices()):
        if start in color:
            continue
        color[start] = 0
        queue = [start]
        while queue:
            v = queue.pop()
            for e in g.incident_edges(v):
                if e.eid in ignore:
                    continue
                u = e.other(v)
                if u not in color:
                    color[u] = 1 - color[v]
                    queue.append(u)
                elif color[u] == color[v]:
                    return None
    return color


def monochromatic_edges(g: MultiGraph, color: dict[int, int]) -> set[int]:
    return {e.eid for e in g.edges() if color[e.u] == color[e.v]}


def certify_bipartization(g: MultiGraph, edge_ids: Iterable[int]) -> bool:
    return color_bipartite(g, ignore_edges=edge_ids) is not None


# -- solution type -----------------------------------------------------------

@dataclass
class Solution:
    """Edge ids of the input graph whose deletion makes it bipartite."""
    edges: set[int]

    def __len__(self) -> int:
        return len(self.edges)


@dataclass
class SolveStats:
    compress_calls: int = 0
    nodes: int = 0
    leaves: int = 0
    rules: dict = field(default_factory=dict)

    def absorb(self, search: "branching.SearchStats") -> None:
        self.nodes += search.nodes
        self.leaves += search.leaves
        for rule, cnt in search.rules.items():
            self.rules[rule] = self.rules.get(rule, 0) + cnt


# -- compression pipeline ------------------------------------------------------

def reduce_to_termsep(g: MultiGraph, k: int, xprime: Iterable[int]) -> TermSepInstance:
    """Replace every edge of the oversized solution by a terminal pair hanging
    off its endpoints; the instance starts with an empty partial separation
    and the same budget."""
    xprime = set(xprime)
    gp = g.copy()
    pairs = []
    for eid in sorted(xprime):
        e = gp.edge(eid)
        orig = resolve_input_edge(e)
        if orig is None:
            raise GraphError(f"edge {eid} has no input provenance")
        gp.delete_edge(eid)
        s = gp.add_vertex()
        t = gp.add_vertex()
        gp.add_edge(e.u, s, tag=("gadget", orig))
        gp.add_edge(e.v, t, tag=("gadget", orig))
        pairs.append((s, t))
    return TermSepInstance(gp, pairs, a0=(), b0=(), k=k)


def lift_solution(inst: TermSepInstance, sep: TerminalSeparation) -> set[int]:
    """Cut edges of an integral separation, mapped to input-graph edge ids."""
    if not sep.is_integral(inst.g):
        raise InstanceError("solution lifting requires an integral separation")
    out: set[int] = set()
    for e in inst.g.boundary_edges(sep.a, sep.b):
        orig = resolve_input_edge(e)
        if orig is None:
            raise GraphError(f"cut edge {e.eid} has no input provenance")
        out.add(orig)
    return out


def compress(g: MultiGraph, k: int, xprime: Iterable[int], engine: str = "branching",
             stats: Optional[SolveStats] = None) -> Optional[set[int]]:
    """Shrink a size-(k+1) solution to size <= k, or report that none exists."""
    xprime = set(xprime)
    if color_bipartite(g, ignore_edges=xprime) is None:
        raise GraphError("compression requires the given set to be a solution")
    inst = reduce_to_termsep(g, k, xprime)
    if stats is not None:
        stats.compress_calls += 1
    if engine == "branching":
        search = branching.SearchStats()
        sep = branching.solve_termsep(inst, stats=search)
        if stats is not None:
            stats.absorb(search)
    elif engine == "guo":
        sep = baseline_guo(inst)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    if sep is None:
        return None
    solution = lift_solution(inst, sep)
    if len(solution) > k or not certify_bipartization(g, solution):
        raise AssertionError("lifted solution failed certification")
    return solution


def solve_edge_bipartization(g: MultiGraph, k: int, engine: str = "branching",
                             stats: Optional[SolveStats] = None) -> Optional[Solution]:
    """Delete at most k edges to make the graph bipartite, or return None.

    Runs iterative compression seeded with the monochromatic edges of a
    BFS 2-coloring: those are inserted one by one, compressing whenever the
    maintained solution overflows the budget.
    """
    if k < 0:
        raise ValueError("budget must be nonnegative")
    if stats is None:
        stats = SolveStats()
    full_coloring = color_bipartite(g)
    if full_coloring is not None:
        return Solution(set())
    greedy = _greedy_coloring(g)
    z = sorted(monochromatic_edges(g, greedy))
    current = g.copy()
    current.delete_edges(z)
    solution: set[int] = set()
    for eid in z:
        current.restore_edge(g.edge(eid))
        grown = solution | {eid}
        if len(grown) <= k:
            solution = grown
            continue
        compressed = compress(current, k, grown, engine=engine, stats=stats)
        if compressed is None:
            return None
        solution = compressed
    if len(solution) > k or not certify_bipartization(g, solution):
        raise AssertionError("pipeline produced an invalid solution")
    return Solution(set(solution))


def _greedy_coloring(g: MultiGraph) -> dict[int, int]:
    coloring = color_bipartite(g)
    if coloring is not None:
        return coloring
    # BFS coloring that tolerates odd cycles: first-seen color wins
    color: dict[int, int] = {}
    for start in sorted(g.vertices()):
        if start in color:
            continue
        color[start] = 0
        queue = [start]
        while queue:
            v = queue.pop(0)
            for u in g.neighbors(v):
                if u not in color:
                    color[u] = 1 - color[v]
                    queue.append(u)
    return color


# -- exhaustive orientation baseline ----------------------------------------

BASELINE_PAIR_GUARD = 25


def baseline_guo(inst: TermSepInstance, guard: int = BASELINE_PAIR_GUARD
                 ) -> Optional[TerminalSeparation]:
    """Optimal integral separation by trying every orientation of the
    unresolved pairs and taking a minimum cut per orientation; None when the
    optimum exceeds the budget."""
    cost2, sep = guo_optimum(inst, guard=guard)
    if cost2 > 2 * inst.k:
        return None
    return sep


def guo_optimum(inst: TermSepInstance, guard: int = BASELINE_PAIR_GUARD
                ) -> tuple[int, TerminalSeparation]:
    """(doubled optimal cost, witness separation), ignoring the budget."""
    free = inst.unresolved_pairs()
    if len(free) > guard:
        raise GuardError(f"{len(free)} unresolved pairs exceed the baseline guard")
    best: Optional[tuple[int, TerminalSeparation]] = None
    vertices = inst.g.vertex_set()
    for mask in range(1 << len(free)):
        sources = set(inst.a0)
        sinks = set(inst.b0)
        for i, (s, t) in enumerate(free):
            if mask >> i & 1:
                sources.add(t)
                sinks.add(s)
            else:
                sources.add(s)
                sinks.add(t)
        if not sinks:
            # no sink side at all: the empty cut is optimal
            return 0, TerminalSeparation(set(vertices), set())
        if not sources:
            return 0, TerminalSeparation(set(), set(vertices))
        value, net = min_cut(inst.g, sources, sinks)
        assert value is not EXCEEDED
        if best is None or 2 * value < best[0]:
            side = net.source_side("min")
            best = (2 * value, TerminalSeparation(side, vertices - side))
    assert best is not None
    return best


# -- oracles ------------------------------------------------------------------

ORACLE_VERTEX_GUARD = 20
ORACLE_EDGE_GUARD = 30


def oracle_min_bipartization(g: MultiGraph) -> tuple[int, set[int]]:
    """Exact minimum edge bipartization (size, witness) by exhausting
    2-colorings per connected component."""
    if g.n <= ORACLE_VERTEX_GUARD:
        return _oracle_by_colorings(g)
    if g.m <= ORACLE_EDGE_GUARD:
        return _oracle_by_subsets(g)
    raise GuardError(f"graph with n={g.n}, m={g.m} exceeds oracle guards")


def _components(g: MultiGraph) -> list[list[int]]:
    seen: set[int] = set()
    comps = []
    for start in sorted(g.vertices()):
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        queue = [start]
        while queue:
            v = queue.pop()
            for u in g.neighbors(v):
                if u not in seen:
                    seen.add(u)
                    comp.append(u)
                    queue.append(u)
        comps.append(sorted(comp))
    return comps


def _oracle_by_colorings(g: MultiGraph) -> tuple[int, set[int]]:
    total = 0
    witness: set[int] = set()
    for comp in _components(g):
        index = {v: i for i, v in enumerate(comp)}
        edges = [(index[e.u], index[e.v], e.eid) for e in g.edges()
                 if e.u in index and e.v in index]
        if not edges:
            continue
        best_bad = None
        best_mask = 0
        for mask in range(1 << (len(comp) - 1)):
            bad = 0
            for iu, iv, _ in edges:
                if ((mask >> iu) ^ (mask >> iv)) & 1 == 0:
                    bad += 1
            if best_bad is None or bad < best_bad:
                best_bad, best_mask = bad, mask
                if bad == 0:
                    break
        total += best_bad
        witness |= {eid for iu, iv, eid in edges
                    if ((best_mask >> iu) ^ (best_mask >> iv)) & 1 == 0}
    return total, witness


def _oracle_by_subsets(g: MultiGraph) -> tuple[int, set[int]]:
    if g.m > ORACLE_EDGE_GUARD:
        raise GuardError(f"m={g.m} exceeds the subset-enumeration guard")
    eids = sorted(e.eid for e in g.edges())
    for size in range(g.m + 1):
        for combo in itertools.combinations(eids, size):
            if color_bipartite(g, ignore_edges=combo) is not None:
                return size, set(combo)
    raise AssertionError("unreachable: deleting all edges is bipartite")


def oracle_termsep(inst: TermSepInstance, guard: int = BASELINE_PAIR_GUARD
                   ) -> Optional[tuple[int, TerminalSeparation]]:
    """Exact optimum integral separation (doubled cost, witness) within the
    budget, or None when even the optimum exceeds it."""
    cost2, sep = guo_optimum(inst, guard=guard)
    if cost2 > 2 * inst.k:
        return None
    return cost2, sep


_EDGE_COST2 = np.array([[0, 1, 1],
                        [1, 0, 2],
                        [1, 2, 0]], dtype=np.int64)

LABELING_SLOT_GUARD = 12


class LabelingOracle:
    """All {undecided, A, B} labelings of an instance above a fixed seed,
    enumerated exhaustively (vectorised); the reference point for relaxation
    minimality, maximality, and persistence checks."""

    def __init__(self, inst: TermSepInstance, seed_a: Iterable[int] = None,
                 seed_b: Iterable[int] = None) -> None:
        self.inst = inst
        seed_a = set(inst.a0 if seed_a is None else seed_a)
        seed_b = set(inst.b0 if seed_b is None else seed_b)
        g = inst.g
        self.vertices = sorted(g.vertices())
        vindex = {v: i for i, v in enumerate(self.vertices)}
        fixed = {v: 1 for v in seed_a}
        fixed.update({v: 2 for v in seed_b})
        slots: list[tuple[str, tuple]] = []
        for (s, t) in inst.pairs:
            if s in fixed or t in fixed:
                continue
            slots.append(("pair", (s, t)))
        terminal = inst.terminals()
        for v in self.vertices:
            if v in fixed or v in terminal:
                continue
            slots.append(("vertex", (v,)))
        if len(slots) > LABELING_SLOT_GUARD:
            raise GuardError(f"{len(slots)} labeling slots exceed the guard")
        count = 3 ** len(slots)
        labels = np.zeros((count, len(self.vertices)), dtype=np.int8)
        for v, lab in fixed.items():
            labels[:, vindex[v]] = lab
        idx = np.arange(count)
        mirror = np.array([0, 2, 1], dtype=np.int8)
        for j, (kind, payload) in enumerate(slots):
            digit = (idx // (3 ** j) % 3).astype(np.int8)
            if kind == "pair":
                s, t = payload
                labels[:, vindex[s]] = digit
                labels[:, vindex[t]] = mirror[digit]
            else:
                labels[:, vindex[payload[0]]] = digit
        cost2 = np.zeros(count, dtype=np.int64)
        for e in g.edges():
            cost2 += _EDGE_COST2[labels[:, vindex[e.u]], labels[:, vindex[e.v]]]
        self.labels = labels
        self.cost2 = cost2
        self.integral = (labels != 0).all(axis=1)
        self._vindex = vindex

    def relaxed_min_cost2(self) -> int:
        return int(self.cost2.min())

    def integral_min_cost2(self) -> int:
        return int(self.cost2[self.integral].min())

    def separation_at(self, row: int) -> TerminalSeparation:
        lab = self.labels[row]
        a = {v for v, i in self._vindex.items() if lab[i] == 1}
        b = {v for v, i in self._vindex.items() if lab[i] == 2}
        return TerminalSeparation(a, b)

    def extension_mask(self, sep: TerminalSeparation) -> np.ndarray:
        mask = np.ones(len(self.cost2), dtype=bool)
        for v in sep.a:
            mask &= self.labels[:, self._vindex[v]] == 1
        for v in sep.b:
            mask &= self.labels[:, self._vindex[v]] == 2
        return mask

    def proper_extensions_mask(self, sep: TerminalSeparation) -> np.ndarray:
        mask = self.extension_mask(sep)
        assigned = (self.labels != 0).sum(axis=1)
        return mask & (assigned > len(sep.a) + len(sep.b))

    def some_optimal_integral_extends(self, sep: TerminalSeparation) -> bool:
        opt = self.integral_min_cost2()
        mask = self.integral & (self.cost2 == opt) & self.extension_mask(sep)
        return bool(mask.any())
