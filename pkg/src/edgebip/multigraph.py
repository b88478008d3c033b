"""Loop-free multigraph with stable vertex ids, edge provenance and merging.

Vertices are integers that are never reused; merging a set of vertices
creates a fresh vertex and records the collapse in a union-find map so that
later transformations compose.  Every edge carries a provenance tag naming
the input edge it stands for (or the transformation that created it), which
is what lets a cut in a transformed graph be traced back to input edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional


class GraphError(ValueError):
    """Raised on malformed graph operations (unknown ids, loops, bad input)."""


# Provenance tags:
#   ("input", eid)   -- edge of the user-supplied instance
#   ("gadget", eid)  -- pendant edge standing in for input edge eid
#   ("cut", note)    -- synthetic edge created by a reduction; never survives
#                       into a lifted solution because lifting re-expresses
#                       cuts on the pre-reduction graph
@dataclass(frozen=True)
class Edge:
    eid: int
    u: int
    v: int
    tag: tuple

    def other(self, w: int) -> int:
        return self.v if w == self.u else self.u

    def ends(self) -> tuple[int, int]:
        return (self.u, self.v)


class MultiGraph:
    def __init__(self) -> None:
        self._adj: dict[int, dict[int, set[int]]] = {}
        self._edges: dict[int, Edge] = {}
        self.terminal_mark: dict[int, int] = {}
        self._merged_into: dict[int, int] = {}
        self._next_vertex = 1
        self._next_edge = 1

    # -- basic accessors ---------------------------------------------------

    @property
    def n(self) -> int:
        return len(self._adj)

    @property
    def m(self) -> int:
        return len(self._edges)

    def vertices(self) -> Iterator[int]:
        return iter(self._adj)

    def vertex_set(self) -> set[int]:
        return set(self._adj)

    def has_vertex(self, v: int) -> bool:
        return v in self._adj

    def edges(self) -> Iterator[Edge]:
        return iter(self._edges.values())

    def edge(self, eid: int) -> Edge:
        try:
            return self._edges[eid]
        except KeyError:
            raise GraphError(f"unknown edge id {eid}") from None

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return sum(len(s) for s in self._adj[v].values())

    def neighbors(self, v: int) -> list[int]:
        self._check_vertex(v)
        return sorted(self._adj[v])

    def multiplicity(self, u: int, v: int) -> int:
        self._check_vertex(u)
        self._check_vertex(v)
        return len(self._adj[u].get(v, ()))

    def edge_ids_between(self, u: int, v: int) -> list[int]:
        self._check_vertex(u)
        self._check_vertex(v)
        return sorted(self._adj[u].get(v, ()))

    def incident_edges(self, v: int) -> list[Edge]:
        self._check_vertex(v)
        out = []
        for eids in self._adj[v].values():
            out.extend(self._edges[e] for e in eids)
        out.sort(key=lambda e: e.eid)
        return out

    def _check_vertex(self, v: int) -> None:
        if v not in self._adj:
            raise GraphError(f"unknown vertex id {v}")

    # -- mutators ----------------------------------------------------------

    def add_vertex(self, v: Optional[int] = None) -> int:
        if v is None:
            v = self._next_vertex
        elif v in self._adj:
            raise GraphError(f"vertex {v} already present")
        self._adj[v] = {}
        self._next_vertex = max(self._next_vertex, v + 1)
        return v

    def add_edge(self, u: int, v: int, tag: Optional[tuple] = None) -> Edge:
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise GraphError(f"loop at vertex {u} rejected")
        eid = self._next_edge
        self._next_edge += 1
        if tag is None:
            tag = ("input", eid)
        e = Edge(eid, u, v, tag)
        self._edges[eid] = e
        self._adj[u].setdefault(v, set()).add(eid)
        self._adj[v].setdefault(u, set()).add(eid)
        return e

    def delete_edge(self, eid: int) -> Edge:
        e = self.edge(eid)
        del self._edges[eid]
        for (a, b) in ((e.u, e.v), (e.v, e.u)):
            s = self._adj[a][b]
            s.discard(eid)
            if not s:
                del self._adj[a][b]
        return e

    def delete_edges(self, eids: Iterable[int]) -> None:
        for eid in list(eids):
            self.delete_edge(eid)

    def restore_edge(self, e: Edge) -> Edge:
        """Re-insert a previously deleted edge under its original id."""
        if e.eid in self._edges:
            raise GraphError(f"edge id {e.eid} already present")
        self._check_vertex(e.u)
        self._check_vertex(e.v)
        self._edges[e.eid] = e
        self._adj[e.u].setdefault(e.v, set()).add(e.eid)
        self._adj[e.v].setdefault(e.u, set()).add(e.eid)
        self._next_edge = max(self._next_edge, e.eid + 1)
        return e

    def delete_vertices(self, vs: Iterable[int]) -> None:
        vs = set(vs)
        for v in vs:
            self._check_vertex(v)
        for v in vs:
            for e in self.incident_edges(v):
                if e.eid in self._edges:
                    self.delete_edge(e.eid)
            del self._adj[v]
            self.terminal_mark.pop(v, None)

    def merge_set(self, x: Iterable[int]) -> int:
        """Collapse the vertex set x into one fresh vertex.

        Boundary edges keep their identity and provenance; edges internal to
        x become loops and are dropped.  Returns the fresh vertex id.
        """
        x = set(x)
        if not x:
            raise GraphError("cannot merge an empty vertex set")
        for v in x:
            self._check_vertex(v)
        z = self.add_vertex()
        boundary: list[Edge] = []
        internal: list[int] = []
        for v in x:
            for e in self.incident_edges(v):
                if e.eid not in self._edges:
                    continue
                if e.u in x and e.v in x:
                    internal.append(e.eid)
                    self.delete_edge(e.eid)
                else:
                    boundary.append(self.delete_edge(e.eid))
        for e in boundary:
            u = e.u if e.u not in x else z
            v = e.v if e.v not in x else z
            re = Edge(e.eid, u, v, e.tag)
            self._edges[e.eid] = re
            self._adj[u].setdefault(v, set()).add(e.eid)
            self._adj[v].setdefault(u, set()).add(e.eid)
        marks = sorted({self.terminal_mark[v] for v in x if v in self.terminal_mark})
        if len(marks) > 1:
            raise GraphError("refusing to merge two terminal-marked vertices")
        for v in x:
            del self._adj[v]
            self.terminal_mark.pop(v, None)
            self._merged_into[v] = z
        if marks:
            self.terminal_mark[z] = marks[0]
        return z

    def find_merged(self, v: int) -> int:
        """Current representative of a (possibly merged-away) vertex id."""
        while v in self._merged_into:
            v = self._merged_into[v]
        return v

    def copy(self) -> "MultiGraph":
        g = MultiGraph()
        g._adj = {v: {u: set(s) for u, s in nb.items()} for v, nb in self._adj.items()}
        g._edges = dict(self._edges)
        g.terminal_mark = dict(self.terminal_mark)
        g._merged_into = dict(self._merged_into)
        g._next_vertex = self._next_vertex
        g._next_edge = self._next_edge
        return g

    # -- cut queries ---------------------------------------------------------

    def cut_size(self, a: Iterable[int]) -> int:
        """Number of edges, with multiplicity, leaving the vertex set a."""
        a = set(a)
        for v in a:
            self._check_vertex(v)
        side = a
        if len(a) > self.n - len(a):
            side = self.vertex_set() - a
        total = 0
        for v in side:
            for u, eids in self._adj[v].items():
                if u not in side:
                    total += len(eids)
        return total

    def edges_between(self, a: Iterable[int], b: Iterable[int]) -> int:
        """Number of edges, with multiplicity, with one end in a, other in b."""
        a, b = set(a), set(b)
        if a & b:
            raise GraphError("edges_between requires disjoint sets")
        for v in a | b:
            self._check_vertex(v)
        if len(b) < len(a):
            a, b = b, a
        total = 0
        for v in a:
            for u, eids in self._adj[v].items():
                if u in b:
                    total += len(eids)
        return total

    def boundary_edges(self, a: Iterable[int], b: Iterable[int]) -> list[Edge]:
        a, b = set(a), set(b)
        out = []
        for v in a:
            for u, eids in self._adj[v].items():
                if u in b:
                    out.extend(self._edges[e] for e in eids)
        out.sort(key=lambda e: e.eid)
        return out


def resolve_input_edge(e: Edge) -> Optional[int]:
    """Input-instance edge id an edge stands for, or None if synthetic."""
    kind = e.tag[0]
    if kind in ("input", "gadget"):
        return e.tag[1]
    return None


# -- text format -----------------------------------------------------------
#
# Header `p edge n m`, one `e u v` line per edge copy (1-based vertex ids,
# repeated lines encode multiplicities), comment lines start with `c`.

def parse_graph(text: str) -> MultiGraph:
    g = MultiGraph()
    declared = None
    extra: list[tuple[int, list[str]]] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "edge":
                raise GraphError(f"line {ln}: bad problem line {raw!r}")
            declared = (int(parts[2]), int(parts[3]))
            for v in range(1, declared[0] + 1):
                g.add_vertex(v)
        elif parts[0] == "e":
            if declared is None:
                raise GraphError(f"line {ln}: edge before problem line")
            if len(parts) != 3:
                raise GraphError(f"line {ln}: bad edge line {raw!r}")
            u, v = int(parts[1]), int(parts[2])
            try:
                g.add_edge(u, v)
            except GraphError as exc:
                raise GraphError(f"line {ln}: {exc}") from None
        else:
            extra.append((ln, parts))
    if declared is None:
        raise GraphError("missing `p edge n m` line")
    if declared[1] != g.m:
        raise GraphError(f"declared {declared[1]} edges, found {g.m}")
    if extra:
        ln, parts = extra[0]
        raise GraphError(f"line {ln}: unknown record {parts[0]!r}")
    return g


def render_graph(g: MultiGraph, comments: Iterable[str] = ()) -> str:
    order = sorted(g.vertices())
    relabel = {v: i for i, v in enumerate(order, start=1)}
    lines = [f"c {c}" for c in comments]
    lines.append(f"p edge {len(order)} {g.m}")
    for e in sorted(g.edges(), key=lambda e: (min(relabel[e.u], relabel[e.v]),
                                              max(relabel[e.u], relabel[e.v]), e.eid)):
        a, b = sorted((relabel[e.u], relabel[e.v]))
        lines.append(f"e {a} {b}")
    return "\n".join(lines) + "\n"
