"""Unit-capacity max-flow with a round bound and extremal min-cut extraction.

Networks are built from unit undirected edges plus high-capacity pin arcs
tying nodes to a super-source or super-sink.  After a flow has been
computed, pins can be probed: a probe succeeds exactly when the added pins
leave the max-flow value unchanged, which is detected by a single residual
search without touching the flow.
"""

from __future__ import annotations

from collections import deque
from typing import Hashable, Iterable, Optional

from .multigraph import MultiGraph

EXCEEDED = "exceeded"

_SOURCE = 0
_SINK = 1


class FlowStateError(RuntimeError):
    """Cut extraction requested in a state where it is undefined."""


class FlowNetwork:
    def __init__(self, r_max: Optional[int] = None) -> None:
        self.r_max = r_max
        self._index: dict[Hashable, int] = {}
        self._keys: list[Hashable] = [None, None]  # source, sink placeholders
        self._head: list[list[int]] = [[], []]
        self._to: list[int] = []
        self._cap: list[int] = []
        self.flow_value = 0
        self._ran = False
        self._exceeded = False
        self._pinned: dict[Hashable, int] = {}

    # -- construction --------------------------------------------------------

    def node(self, key: Hashable) -> int:
        idx = self._index.get(key)
        if idx is None:
            idx = len(self._keys)
            self._index[key] = idx
            self._keys.append(key)
            self._head.append([])
        return idx

    def _arc_pair(self, a: int, b: int, cap_ab: int, cap_ba: int) -> int:
        i = len(self._to)
        self._to.append(b)
        self._cap.append(cap_ab)
        self._to.append(a)
        self._cap.append(cap_ba)
        self._head[a].append(i)
        self._head[b].append(i + 1)
        return i

    def add_edge(self, a: Hashable, b: Hashable) -> None:
        """Unit undirected edge; parallel calls model multiplicities."""
        ia, ib = self.node(a), self.node(b)
        if ia == ib:
            return  # loops carry no cut weight
        self._arc_pair(ia, ib, 1, 1)

    def _pin_cap(self) -> int:
        if self.r_max is not None:
            return self.r_max + 1
        return len(self._to) + 2

    def pin_source(self, key: Hashable) -> None:
        self._pin(key, _SOURCE)

    def pin_sink(self, key: Hashable) -> None:
        self._pin(key, _SINK)

    def _pin(self, key: Hashable, side: int) -> None:
        prev = self._pinned.get(key)
        if prev == side:
            return
        if prev is not None:
            raise FlowStateError(f"node {key!r} pinned to both sides")
        self._pinned[key] = side
        idx = self.node(key)
        if side == _SOURCE:
            self._arc_pair(_SOURCE, idx, self._pin_cap(), 0)
        else:
            self._arc_pair(idx, _SINK, self._pin_cap(), 0)

    # -- max flow --------------------------------------------------------------

    def _bfs_path(self) -> Optional[list[int]]:
        parent_arc = {_SOURCE: -1}
        queue = deque([_SOURCE])
        to, cap, head = self._to, self._cap, self._head
        while queue:
            u = queue.popleft()
            for a in head[u]:
                if cap[a] <= 0:
                    continue
                v = to[a]
                if v in parent_arc:
                    continue
                parent_arc[v] = a
                if v == _SINK:
                    path = []
                    while v != _SOURCE:
                        arc = parent_arc[v]
                        path.append(arc)
                        v = to[arc ^ 1]
                    return path
                queue.append(v)
        return None

    def max_flow(self):
        """Exact max-flow value, or EXCEEDED once it passes the round bound.

        Residual state is retained either way; cut extraction requires a
        non-exceeded run.
        """
        cap = self._cap
        while True:
            if self.r_max is not None and self.flow_value > self.r_max:
                self._exceeded = True
                self._ran = True
                return EXCEEDED
            path = self._bfs_path()
            if path is None:
                self._ran = True
                self._exceeded = False
                return self.flow_value
            push = min(cap[a] for a in path)
            for a in path:
                cap[a] -= push
                cap[a ^ 1] += push
            self.flow_value += push

    def has_augmenting_path(self) -> bool:
        return self._bfs_path() is not None

    # -- pin probing ------------------------------------------------------------

    def _append_pins(self, source_keys, sink_keys) -> tuple[int, list[int]]:
        n_arcs = len(self._to)
        touched = []
        for key in source_keys:
            idx = self.node(key)
            self._arc_pair(_SOURCE, idx, self._pin_cap(), 0)
            touched += [_SOURCE, idx]
        for key in sink_keys:
            idx = self.node(key)
            self._arc_pair(idx, _SINK, self._pin_cap(), 0)
            touched += [idx, _SINK]
        return n_arcs, touched

    def _rollback_arcs(self, n_arcs: int, touched: list[int]) -> None:
        del self._to[n_arcs:]
        del self._cap[n_arcs:]
        for node in touched:
            self._head[node].pop()

    def probe_pins(self, source_keys: Iterable[Hashable], sink_keys: Iterable[Hashable],
                   commit: bool = True) -> bool:
        """True iff pinning the given nodes keeps the max flow unchanged.

        On success with commit=True the pins are kept (flow untouched);
        otherwise the network is restored exactly.
        """
        if not self._ran or self._exceeded:
            raise FlowStateError("probe requires a completed bounded flow")
        source_keys, sink_keys = list(source_keys), list(sink_keys)
        for key in source_keys:
            if self._pinned.get(key) == _SINK:
                raise FlowStateError(f"conflicting pin for {key!r}")
        for key in sink_keys:
            if self._pinned.get(key) == _SOURCE:
                raise FlowStateError(f"conflicting pin for {key!r}")
        mark, touched = self._append_pins(source_keys, sink_keys)
        ok = not self.has_augmenting_path()
        if ok and commit:
            for key in source_keys:
                self._pinned[key] = _SOURCE
            for key in sink_keys:
                self._pinned[key] = _SINK
        else:
            self._rollback_arcs(mark, touched)
        return ok

    # -- cut extraction --------------------------------------------------------

    def _require_cut_state(self) -> None:
        if not self._ran:
            raise FlowStateError("max_flow has not been run")
        if self._exceeded:
            raise FlowStateError("flow exceeded the round bound; no cut available")

    def source_side(self, extremal: str = "min") -> set:
        """Graph keys on the source side of the extremal minimum cut.

        "min": nodes residual-reachable from the source (unique minimal
        source side).  "max": complement of the nodes that can still reach
        the sink (unique maximal source side).
        """
        self._require_cut_state()
        to, cap, head = self._to, self._cap, self._head
        if extremal == "min":
            seen = {_SOURCE}
            queue = deque([_SOURCE])
            while queue:
                u = queue.popleft()
                for a in head[u]:
                    v = to[a]
                    if cap[a] > 0 and v not in seen:
                        seen.add(v)
                        queue.append(v)
            inside = seen
        elif extremal == "max":
            co = {_SINK}
            queue = deque([_SINK])
            while queue:
                u = queue.popleft()
                for a in head[u]:
                    # arc a is u->v; its pair v->u has residual cap[a^1]
                    v = to[a]
                    if cap[a ^ 1] > 0 and v not in co:
                        co.add(v)
                        queue.append(v)
            inside = {i for i in range(len(self._keys)) if i not in co}
        else:
            raise ValueError(f"extremal must be 'min' or 'max', got {extremal!r}")
        return {self._keys[i] for i in inside if i >= 2}


def build_cut_network(g: MultiGraph, sources: Iterable[int], sinks: Iterable[int],
                      r_max: Optional[int] = None) -> FlowNetwork:
    """Cut network over a multigraph: parallel unit arcs per edge copy,
    super-source/super-sink pins on the given vertex sets."""
    sources, sinks = set(sources), set(sinks)
    if sources & sinks:
        raise FlowStateError("source and sink sets must be disjoint")
    net = FlowNetwork(r_max=r_max)
    for v in sorted(g.vertices()):
        net.node(v)
    for e in sorted(g.edges(), key=lambda e: e.eid):
        net.add_edge(e.u, e.v)
    for v in sorted(sources):
        net.pin_source(v)
    for v in sorted(sinks):
        net.pin_sink(v)
    return net


def min_cut(g: MultiGraph, sources: Iterable[int], sinks: Iterable[int],
            r_max: Optional[int] = None):
    """(value, network) for the minimum edge cut between two vertex sets;
    value is EXCEEDED when it is above r_max."""
    net = build_cut_network(g, sources, sinks, r_max=r_max)
    return net.max_flow(), net
