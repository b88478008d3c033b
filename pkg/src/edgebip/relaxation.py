"""Terminal separation instances and their half-integral relaxation.

The relaxation assigns each vertex one of {undecided, A, B} and is solved
exactly through a doubled flow network: every vertex v contributes nodes
v+ and v-, every graph edge contributes a unit edge in each layer, and a
terminal pair (s, t) identifies s+ with t- and s- with t+ so that any cut
resolves the pair consistently.  Pinning v+ to the source and v- to the
sink forces v onto the A side (B symmetric).  The minimum cut value equals
twice the minimum separation cost, and committing zero-cost pins one vertex
at a time yields a maximal minimum-cost separation; fixing it is safe
because some optimal integral separation extends every optimal partial one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .flow import EXCEEDED, FlowNetwork
from .multigraph import GraphError, MultiGraph

PLUS = 0
MINUS = 1


class InstanceError(ValueError):
    """Malformed terminal-separation instance or seed."""


@dataclass
class TerminalSeparation:
    a: set[int]
    b: set[int]

    def cost2(self, g: MultiGraph) -> int:
        """Twice the separation cost; kept integral for exactness."""
        return g.cut_size(self.a) + g.cut_size(self.b)

    def assigned(self) -> set[int]:
        return self.a | self.b

    def is_integral(self, g: MultiGraph) -> bool:
        return len(self.a) + len(self.b) == g.n

    def side_of(self, v: int) -> Optional[str]:
        if v in self.a:
            return "A"
        if v in self.b:
            return "B"
        return None


@dataclass
class ProbeReport:
    """Immediate effect of fixing a seed: newly resolved pairs, doubled cost
    increase, and the count of immediately applicable boundary deletions."""
    resolved: int
    cost_delta2: int
    rho: int

    @property
    def cost_delta(self) -> float:
        return self.cost_delta2 / 2


class TermSepInstance:
    """Graph, disjoint degree-<=1 terminal pairs, partial separation, budget."""

    def __init__(self, g: MultiGraph, pairs: Iterable[tuple[int, int]],
                 a0: Iterable[int] = (), b0: Iterable[int] = (), k: int = 0,
                 trace: Optional[Callable] = None) -> None:
        self.g = g
        self.pairs: list[tuple[int, int]] = [tuple(sorted(p)) for p in pairs]
        self.a0: set[int] = set(a0)
        self.b0: set[int] = set(b0)
        self.k = k
        self.trace = trace
        self.lift_stack: list[tuple] = []
        for i, (s, t) in enumerate(self.pairs):
            g.terminal_mark[s] = i
            g.terminal_mark[t] = i
        self.validate()

    # -- bookkeeping ----------------------------------------------------------

    def validate(self) -> None:
        seen: set[int] = set()
        for s, t in self.pairs:
            if s == t:
                raise InstanceError(f"degenerate terminal pair ({s},{t})")
            for v in (s, t):
                if not self.g.has_vertex(v):
                    raise InstanceError(f"terminal {v} not in graph")
                if v in seen:
                    raise InstanceError(f"terminal {v} in two pairs")
                seen.add(v)
                if self.g.degree(v) > 1:
                    raise InstanceError(f"terminal {v} has degree > 1")
        if self.a0 & self.b0:
            raise InstanceError("A and B sides intersect")
        for v in self.a0 | self.b0:
            if not self.g.has_vertex(v):
                raise InstanceError(f"assigned vertex {v} not in graph")
        check_pair_discipline(self.pairs, self.a0, self.b0)

    def terminals(self) -> set[int]:
        return {v for p in self.pairs for v in p}

    def partner(self, v: int) -> int:
        for s, t in self.pairs:
            if v == s:
                return t
            if v == t:
                return s
        raise InstanceError(f"{v} is not a terminal")

    def unresolved_pairs(self) -> list[tuple[int, int]]:
        assigned = self.a0 | self.b0
        return [p for p in self.pairs if p[0] not in assigned]

    @property
    def t_count(self) -> int:
        return len(self.unresolved_pairs())

    def cost2(self) -> int:
        return self.g.cut_size(self.a0) + self.g.cut_size(self.b0)

    def nu2(self) -> int:
        """Twice the slack between the budget and the current cost."""
        return 2 * self.k - self.cost2()

    def separation(self) -> TerminalSeparation:
        return TerminalSeparation(set(self.a0), set(self.b0))

    def is_integral(self) -> bool:
        return len(self.a0) + len(self.b0) == self.g.n

    def clone(self) -> "TermSepInstance":
        inst = TermSepInstance.__new__(TermSepInstance)
        inst.g = self.g.copy()
        inst.pairs = list(self.pairs)
        inst.a0 = set(self.a0)
        inst.b0 = set(self.b0)
        inst.k = self.k
        inst.trace = self.trace
        inst.lift_stack = []
        return inst

    def emit(self, event: str, **data) -> None:
        if self.trace is not None:
            self.trace(event, data)

    # -- reduction-side mutators (record how to lift a separation back) -------

    def merge_vertices(self, xs: Iterable[int]) -> int:
        xs = set(xs)
        if xs & self.terminals():
            raise InstanceError("reductions never merge terminal vertices")
        if xs & self.a0 and xs & self.b0:
            raise InstanceError("cannot merge across both separation sides")
        z = self.g.merge_set(xs)
        if xs & self.a0:
            self.a0 -= xs
            self.a0.add(z)
        if xs & self.b0:
            self.b0 -= xs
            self.b0.add(z)
        self.lift_stack.append(("merge", z, frozenset(xs)))
        return z

    def drop_pair(self, pair: tuple[int, int]) -> None:
        self.pairs.remove(pair)
        for v in pair:
            self.g.terminal_mark.pop(v, None)

    def lift(self, sep: TerminalSeparation) -> TerminalSeparation:
        """Map a separation of the current graph back through every recorded
        reduction to a separation of the instance as originally given."""
        a, b = set(sep.a), set(sep.b)

        def side(v: int) -> str:
            return "A" if v in a else "B"

        def put(v: int, s: str) -> None:
            (a if s == "A" else b).add(v)

        def opposite(s: str) -> str:
            return "B" if s == "A" else "A"

        for entry in reversed(self.lift_stack):
            kind = entry[0]
            if kind == "merge":
                _, z, xs = entry
                s = side(z)
                (a if s == "A" else b).discard(z)
                for v in xs:
                    put(v, s)
            elif kind == "delete_anchor":
                _, xs, anchor = entry
                s = side(anchor) if anchor is not None else "A"
                for v in xs:
                    put(v, s)
            elif kind == "pendant_split":
                _, u, v, xu, xw = entry
                su, sv = side(u), side(v)
                for w in xu:
                    put(w, su)
                for w in xw:
                    put(w, sv)
            elif kind == "lonely":
                _, s_term, t_term, t_nb = entry
                st = side(t_nb) if t_nb is not None else "A"
                put(t_term, st)
                put(s_term, opposite(st))
            elif kind == "adjacent_same":
                _, t1, t2 = entry
                put(t1, "A")
                put(t2, "B")
            elif kind == "adjacent_cross":
                _, t1, t2, s1, s2 = entry
                put(t1, opposite(side(s1)))
                put(t2, opposite(side(s2)))
            elif kind == "common":
                _, s_term, t_term, mid = entry
                put(t_term, side(mid))
                put(s_term, opposite(side(mid)))
            else:  # pragma: no cover - defensive
                raise InstanceError(f"unknown lift entry {kind!r}")
        return TerminalSeparation(a, b)


def check_pair_discipline(pairs, seta, setb) -> None:
    """Every pair must be untouched or split across the two sides."""
    for s, t in pairs:
        ins = (s in seta, s in setb)
        int_ = (t in seta, t in setb)
        states = {ins, int_}
        if ins == (False, False) and int_ == (False, False):
            continue
        if states == {(True, False), (False, True)} and ins != int_:
            continue
        raise InstanceError(f"pair ({s},{t}) violates separation discipline")


class RelaxationSolver:
    """One relaxation solve for a seed extension of an instance.

    The flow is computed eagerly; resolution probes are available before the
    maximal separation is materialised, after which the network is committed
    to the maximality pins.
    """

    def __init__(self, inst: TermSepInstance, seed_a: Iterable[int],
                 seed_b: Iterable[int]) -> None:
        self.inst = inst
        self.seed_a = set(seed_a)
        self.seed_b = set(seed_b)
        g = inst.g
        if not (self.seed_a >= inst.a0 and self.seed_b >= inst.b0):
            raise InstanceError("seed does not extend the current separation")
        if self.seed_a & self.seed_b:
            raise InstanceError("seed sides intersect")
        for v in (self.seed_a | self.seed_b) - inst.a0 - inst.b0:
            if not g.has_vertex(v):
                raise InstanceError(f"seed vertex {v} not in graph")
        check_pair_discipline(inst.pairs, self.seed_a, self.seed_b)

        self._partner: dict[int, int] = {}
        for s, t in inst.pairs:
            self._partner[s] = t
            self._partner[t] = s

        net = FlowNetwork(r_max=2 * g.m + 2)
        self._net = net
        for e in sorted(g.edges(), key=lambda e: e.eid):
            for layer in (PLUS, MINUS):
                net.add_edge(self._canon(e.u, layer), self._canon(e.v, layer))
        for v in sorted(self.seed_a):
            net.pin_source(self._canon(v, PLUS))
            net.pin_sink(self._canon(v, MINUS))
        for v in sorted(self.seed_b):
            net.pin_source(self._canon(v, MINUS))
            net.pin_sink(self._canon(v, PLUS))
        value = net.max_flow()
        if value is EXCEEDED:  # pragma: no cover - bound is above any cut
            raise InstanceError("relaxation flow exceeded its safety bound")
        self.cost2: int = value
        self._sep: Optional[TerminalSeparation] = None

    def _canon(self, v: int, layer: int) -> tuple[int, int]:
        """Network node for (vertex, layer); the larger terminal of a pair
        aliases the mirrored node of the smaller one."""
        p = self._partner.get(v)
        if p is not None and p < v:
            return (p, 1 - layer)
        return (v, layer)

    def _pins_for(self, v: int, side: str) -> tuple[list, list]:
        plus, minus = self._canon(v, PLUS), self._canon(v, MINUS)
        if side == "A":
            return [plus], [minus]
        return [minus], [plus]

    def resolves_free(self, extra_a: Iterable[int], extra_b: Iterable[int]) -> bool:
        """Whether the extra assignments are attainable at the current optimum
        (checked without committing them)."""
        if self._sep is not None:
            raise InstanceError("probe must run before the maximal separation")
        srcs: list = []
        snks: list = []
        for v in extra_a:
            s, t = self._pins_for(v, "A")
            srcs += s
            snks += t
        for v in extra_b:
            s, t = self._pins_for(v, "B")
            srcs += s
            snks += t
        return self._net.probe_pins(srcs, snks, commit=False)

    def maximal_separation(self) -> TerminalSeparation:
        """Minimum-cost separation extending the seed such that every proper
        extension is strictly costlier.  Deterministic: vertices are probed in
        increasing id order, A side first; a rejected probe stays rejected as
        pins accumulate, so one pass suffices."""
        if self._sep is not None:
            return self._sep
        label: dict[int, str] = {}
        for v in self.seed_a:
            label[v] = "A"
        for v in self.seed_b:
            label[v] = "B"
        for v in sorted(self.inst.g.vertices()):
            if v in label:
                continue
            committed = None
            for side in ("A", "B"):
                srcs, snks = self._pins_for(v, side)
                if self._net.probe_pins(srcs, snks, commit=True):
                    committed = side
                    break
            if committed is None:
                continue
            label[v] = committed
            p = self._partner.get(v)
            if p is not None and p not in label:
                label[p] = "B" if committed == "A" else "A"
        a = {v for v, s in label.items() if s == "A"}
        b = {v for v, s in label.items() if s == "B"}
        self._sep = TerminalSeparation(a, b)
        return self._sep


def min_cost_extension(inst: TermSepInstance, seed_a: Iterable[int],
                       seed_b: Iterable[int]) -> TerminalSeparation:
    """Maximal minimum-cost terminal separation extending the given seed."""
    return RelaxationSolver(inst, seed_a, seed_b).maximal_separation()


def normalize(inst: TermSepInstance) -> int:
    """Replace the partial separation with its maximal minimum-cost extension;
    idempotent.  Returns the doubled cost of the result (the caller decides
    what to do when it exceeds the budget)."""
    solver = RelaxationSolver(inst, inst.a0, inst.b0)
    sep = solver.maximal_separation()
    inst.a0, inst.b0 = sep.a, sep.b
    return solver.cost2


def immediate_boundary_count(g: MultiGraph, a: Iterable[int], b: Iterable[int]) -> int:
    """Boundary deletions available right away against the two sides: direct
    edges between them plus, per undecided vertex, the smaller of its edge
    counts into either side."""
    a, b = set(a), set(b)
    rho = len(g.boundary_edges(a, b))
    for v in sorted(g.vertex_set() - a - b):
        ea = g.edges_between({v}, a)
        eb = g.edges_between({v}, b)
        rho += min(ea, eb)
    return rho


def probe_branch(inst: TermSepInstance, seed_a: Iterable[int],
                 seed_b: Iterable[int]) -> ProbeReport:
    """Read-only report on fixing a seed: how many new pairs resolve, how much
    the cost grows, and how many boundary deletions become available."""
    base_assigned = inst.a0 | inst.b0
    base_cost2 = inst.cost2()
    solver = RelaxationSolver(inst, seed_a, seed_b)
    sep = solver.maximal_separation()
    resolved = sum(1 for s, t in inst.pairs
                   if s not in base_assigned and s in sep.assigned())
    rho = immediate_boundary_count(inst.g, sep.a, sep.b)
    return ProbeReport(resolved, solver.cost2 - base_cost2, rho)
