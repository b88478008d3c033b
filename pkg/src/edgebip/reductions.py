"""Reduction rules for terminal-separation instances and their driver.

Rules are scanned in a fixed priority order; each application strictly
decreases budget + pair count + vertex count, and the driver re-normalizes
the instance (re-extends the partial separation to a maximal minimum-cost
one) after every application, so later rules may assume a maximal instance
with all earlier rules exhausted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .excess import enumerate_compact_extensions, side_view
from .flow import EXCEEDED, min_cut
from .multigraph import MultiGraph
from .relaxation import TermSepInstance, TerminalSeparation, normalize

NO_SOLUTION = "terminated_no_solution"
SOLVED = "solved"
APPLIED = "applied"
NOT_APPLICABLE = "not_applicable"

RULE_ORDER = (
    "terminator",
    "boundary",
    "pendant",
    "lonely_terminal",
    "adjacent_terminals",
    "common_neighbor",
    "majority_neighbour",
    "excess1",
    "excess2",
)


@dataclass
class ReductionOutcome:
    kind: str
    rule: str = ""
    separation: Optional[TerminalSeparation] = None


def _applied(rule: str) -> ReductionOutcome:
    return ReductionOutcome(APPLIED, rule)


def _free_nonterminals(inst: TermSepInstance) -> set[int]:
    return (inst.g.vertex_set() - inst.a0 - inst.b0) - inst.terminals()


# -- the rules ---------------------------------------------------------------

def terminator(inst: TermSepInstance, assume_maximal: bool = False) -> ReductionOutcome:
    """Close the branch on a dead budget or a finished separation."""
    if inst.k < 0 or inst.nu2() < 0:
        return ReductionOutcome(NO_SOLUTION, "terminator")
    if inst.is_integral():
        return ReductionOutcome(SOLVED, "terminator", inst.separation())
    if assume_maximal and inst.t_count > 0 and inst.nu2() == 0:
        # On a maximal instance every proper extension costs strictly more,
        # so with zero slack no integral resolution can fit the budget.
        return ReductionOutcome(NO_SOLUTION, "terminator")
    return ReductionOutcome(NOT_APPLICABLE, "terminator")


def boundary(inst: TermSepInstance) -> ReductionOutcome:
    """Delete one edge between the two sides (or a free vertex's opposing
    edge pair) and pay for it from the budget."""
    g = inst.g
    direct = g.boundary_edges(inst.a0, inst.b0)
    if direct:
        g.delete_edge(direct[0].eid)
        inst.k -= 1
        return _applied("boundary")
    for v in sorted(g.vertex_set() - inst.a0 - inst.b0):
        to_a = [e for e in g.incident_edges(v) if e.other(v) in inst.a0]
        to_b = [e for e in g.incident_edges(v) if e.other(v) in inst.b0]
        if to_a and to_b:
            g.delete_edge(to_a[0].eid)
            g.delete_edge(to_b[0].eid)
            inst.k -= 1
            return _applied("boundary")
    return ReductionOutcome(NOT_APPLICABLE, "boundary")


def _components_avoiding(g: MultiGraph, banned: set[int]) -> list[set[int]]:
    seen: set[int] = set()
    comps = []
    for start in sorted(g.vertices()):
        if start in seen or start in banned:
            continue
        comp = {start}
        seen.add(start)
        queue = [start]
        while queue:
            v = queue.pop()
            for u in g.neighbors(v):
                if u not in seen and u not in banned:
                    seen.add(u)
                    comp.add(u)
                    queue.append(u)
        comps.append(comp)
    return comps


def pendant(inst: TermSepInstance) -> ReductionOutcome:
    """Strip terminal-free blobs hanging off at most two attachment vertices:
    zero or one attachment deletes the blob, two attachments replace it by
    parallel edges matching its internal minimum cut (or collapse everything
    when that cut already exceeds the budget)."""
    g = inst.g
    free = _free_nonterminals(inst)

    for comp in _components_avoiding(g, set()):
        if comp <= free:
            inst.lift_stack.append(("delete_anchor", frozenset(comp), None))
            g.delete_vertices(comp)
            return _applied("pendant")

    for anchor in sorted(g.vertices()):
        for comp in _components_avoiding(g, {anchor}):
            if comp <= free:
                inst.lift_stack.append(("delete_anchor", frozenset(comp), anchor))
                g.delete_vertices(comp)
                return _applied("pendant")

    order = sorted(g.vertices())
    for i, u in enumerate(order):
        for v in order[i + 1:]:
            for comp in _components_avoiding(g, {u, v}):
                if not comp <= free:
                    continue
                nb = set()
                for w in comp:
                    nb.update(g.neighbors(w))
                nb -= comp
                if nb != {u, v}:
                    continue
                return _pendant_two_attachments(inst, comp, u, v)
    return ReductionOutcome(NOT_APPLICABLE, "pendant")


def _induced_subgraph(g: MultiGraph, vs: set[int]) -> MultiGraph:
    sub = MultiGraph()
    for v in sorted(vs):
        sub.add_vertex(v)
    for e in g.edges():
        if e.u in vs and e.v in vs:
            sub.add_vertex  # no-op reference to keep ids aligned
            sub.restore_edge(e)
    return sub


def _pendant_two_attachments(inst: TermSepInstance, comp: set[int], u: int, v: int
                             ) -> ReductionOutcome:
    g = inst.g
    sub = _induced_subgraph(g, comp | {u, v})
    lam, net = min_cut(sub, {u}, {v}, r_max=inst.k)
    if lam is EXCEEDED:
        if (u in inst.a0 and v in inst.b0) or (u in inst.b0 and v in inst.a0):
            # every separation pays more than the whole budget inside the blob
            return ReductionOutcome(NO_SOLUTION, "pendant")
        inst.merge_vertices(comp | {u, v})
        return _applied("pendant")
    u_side = net.source_side("min")
    xu = frozenset(comp & u_side)
    xw = frozenset(comp - u_side)
    inst.lift_stack.append(("pendant_split", u, v, xu, xw))
    g.delete_vertices(comp)
    for e in list(g.boundary_edges({u}, {v})):
        g.delete_edge(e.eid)
    for _ in range(lam):
        g.add_edge(u, v, tag=("cut", "pendant"))
    return _applied("pendant")


def lonely_terminal(inst: TermSepInstance) -> ReductionOutcome:
    """Drop an unresolved pair whose member is an isolated vertex."""
    g = inst.g
    for s, t in inst.unresolved_pairs():
        iso, other = (s, t) if g.degree(s) == 0 else (t, s) if g.degree(t) == 0 else (None, None)
        if iso is None:
            continue
        nbs = g.neighbors(other)
        inst.lift_stack.append(("lonely", iso, other, nbs[0] if nbs else None))
        inst.drop_pair((s, t))
        g.delete_vertices({s, t})
        return _applied("lonely_terminal")
    return ReductionOutcome(NOT_APPLICABLE, "lonely_terminal")


def adjacent_terminals(inst: TermSepInstance) -> ReductionOutcome:
    """Resolve a direct edge between two unresolved terminals: within a pair
    the edge is always cut; across pairs it is re-expressed between the two
    partner terminals' anchors."""
    g = inst.g
    unresolved = inst.unresolved_pairs()
    pair_of = {}
    for p in unresolved:
        for v in p:
            pair_of[v] = p
    members = sorted(pair_of)
    for t1 in members:
        for t2 in g.neighbors(t1):
            if t2 not in pair_of:
                continue
            p1, p2 = pair_of[t1], pair_of[t2]
            if p1 == p2:
                inst.lift_stack.append(("adjacent_same", t1, t2))
                inst.drop_pair(p1)
                g.delete_vertices({t1, t2})
                inst.k -= 1
                return _applied("adjacent_terminals")
            s1 = p1[0] if p1[1] == t1 else p1[1]
            s2 = p2[0] if p2[1] == t2 else p2[1]
            inst.lift_stack.append(("adjacent_cross", t1, t2, s1, s2))
            inst.drop_pair(p1)
            inst.drop_pair(p2)
            g.delete_vertices({t1, t2})
            g.add_edge(s1, s2, tag=("cut", "adjacent-terminals"))
            return _applied("adjacent_terminals")
    return ReductionOutcome(NOT_APPLICABLE, "adjacent_terminals")


def common_neighbor(inst: TermSepInstance) -> ReductionOutcome:
    """Drop an unresolved pair whose terminals hang off the same vertex;
    exactly one of the two pendant edges is cut either way."""
    g = inst.g
    for s, t in inst.unresolved_pairs():
        if g.degree(s) != 1 or g.degree(t) != 1:
            continue
        a = g.neighbors(s)[0]
        if a == g.neighbors(t)[0]:
            inst.lift_stack.append(("common", s, t, a))
            inst.drop_pair((s, t))
            g.delete_vertices({s, t})
            inst.k -= 1
            return _applied("common_neighbor")
    return ReductionOutcome(NOT_APPLICABLE, "common_neighbor")


def majority_neighbour(inst: TermSepInstance) -> ReductionOutcome:
    """Identify a free vertex with a neighbor that carries at least half of
    its incident edges; flipping it to that neighbor's side never hurts."""
    g = inst.g
    free = _free_nonterminals(inst)
    for u in sorted(free):
        deg = g.degree(u)
        if deg == 0:
            continue
        for v in g.neighbors(u):
            if v in free and 2 * g.multiplicity(u, v) >= deg:
                inst.merge_vertices({u, v})
                return _applied("majority_neighbour")
    return ReductionOutcome(NOT_APPLICABLE, "majority_neighbour")


def excess1_reduction(inst: TermSepInstance) -> ReductionOutcome:
    """Collapse any excess-1 extension with more than one new vertex; some
    optimal integral separation keeps it whole on one side."""
    for side in ("A", "B"):
        base = side_view(inst, side).base
        for ce in enumerate_compact_extensions(inst, 1, side):
            extra = set(ce.vertices) - base
            if ce.excess == 1 and len(extra) > 1:
                inst.merge_vertices(extra)
                return _applied("excess1")
    return ReductionOutcome(NOT_APPLICABLE, "excess1")


def excess2_reduction(inst: TermSepInstance) -> ReductionOutcome:
    """Collapse the heavy part of an excess-2 extension: every new vertex
    that does not form an excess-1 extension by itself moves as one block."""
    for side in ("A", "B"):
        view = side_view(inst, side)
        base = view.base
        for ce in enumerate_compact_extensions(inst, 2, side):
            if ce.excess != 2:
                continue
            heavy = {v for v in ce.vertices - base
                     if view.excess(base | {v}) != 1}
            if len(heavy) > 1:
                inst.merge_vertices(heavy)
                return _applied("excess2")
    return ReductionOutcome(NOT_APPLICABLE, "excess2")


_RULES = (
    ("boundary", boundary),
    ("pendant", pendant),
    ("lonely_terminal", lonely_terminal),
    ("adjacent_terminals", adjacent_terminals),
    ("common_neighbor", common_neighbor),
    ("majority_neighbour", majority_neighbour),
    ("excess1", excess1_reduction),
    ("excess2", excess2_reduction),
)


@dataclass
class ReduceResult:
    outcome: str                      # "reduced" | NO_SOLUTION | SOLVED
    separation: Optional[TerminalSeparation] = None
    applications: list = field(default_factory=list)
    boundary_count: int = 0
    cost2_after_normalize: int = 0

    def count(self, rule: str) -> int:
        return sum(1 for r in self.applications if r == rule)


def reduce_exhaustively(inst: TermSepInstance) -> ReduceResult:
    """Run normalize + the rule list to a fixpoint (or a terminal outcome)."""
    result = ReduceResult("reduced")
    budget_guard = inst.k + len(inst.pairs) + inst.g.n + 2
    first_cost2 = None
    for _ in range(max(budget_guard, 2) * 4):
        cost2 = normalize(inst)
        if first_cost2 is None:
            first_cost2 = cost2
            result.cost2_after_normalize = cost2
        out = terminator(inst, assume_maximal=True)
        if out.kind == NO_SOLUTION:
            result.outcome = NO_SOLUTION
            return result
        if out.kind == SOLVED:
            result.outcome = SOLVED
            result.separation = out.separation
            return result
        before = (inst.k, len(inst.pairs), inst.g.n, inst.cost2())
        for name, rule in _RULES:
            out = rule(inst)
            if out.kind == NO_SOLUTION:
                result.outcome = NO_SOLUTION
                return result
            if out.kind == APPLIED:
                result.applications.append(name)
                if name == "boundary":
                    result.boundary_count += 1
                after = (inst.k, len(inst.pairs), inst.g.n, inst.cost2())
                inst.emit("reduction", rule=name,
                          dk=after[0] - before[0],
                          dpairs=after[1] - before[1],
                          dv=after[2] - before[2],
                          dcost2=after[3] - before[3])
                break
        else:
            return result
    raise AssertionError("reduction driver failed to reach a fixpoint")
